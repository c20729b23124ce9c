#include "cavmd/analysis.hpp"

#include "cavmd/error.hpp"
#include "cavmd/units.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace cavmd {

namespace {

// FFTW planning is not thread safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!raw) throw std::bad_alloc();
    return FftwBuffer<T>(raw);
}

// |FFT|^2 for bins 0..n/2 of a zero-padded real signal.
std::vector<double> real_power(std::span<const double> x, std::size_t n) {
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::fill(in.get(), in.get() + n, 0.0);
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    return power;
}

// Magnitude of the analytic signal of x.
std::vector<double> analytic_magnitude(std::span<const double> x) {
    const std::size_t n = x.size();
    auto buf = fftw_buffer<fftw_complex>(n);
    Plan fwd, inv;
    {
        std::lock_guard lock(planner_mutex());
        fwd.reset(fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
        inv.reset(fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    }
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = x[i];
        buf[i][1] = 0.0;
    }
    fftw_execute(fwd.get());
    // keep DC (and Nyquist), double positive frequencies, drop negative ones
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < n; ++k) {
        double scale = 0.0;
        if (k < (n + 1) / 2) scale = 2.0;
        else if (n % 2 == 0 && k == half) scale = 1.0;
        buf[k][0] *= scale;
        buf[k][1] *= scale;
    }
    fftw_execute(inv.get());
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::hypot(buf[i][0], buf[i][1]) / static_cast<double>(n);
    return mag;
}

double uniform_step(std::span<const double> times) {
    const std::size_t n = times.size();
    const double dt = (times.back() - times.front()) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) throw AnalysisError("time axis must be increasing");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt)
            throw AnalysisError("non-uniform sampling at sample " + std::to_string(i));
    }
    return dt;
}

std::vector<double> window_values(Window w, std::size_t n) {
    std::vector<double> out(n, 1.0);
    if (w == Window::hann && n > 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return out;
}

}  // namespace

std::string to_string(Window w) { return w == Window::hann ? "hann" : "none"; }

Window window_from_string(const std::string& name) {
    if (name == "hann") return Window::hann;
    if (name == "none") return Window::none;
    throw InvalidInput("unknown window '" + name + "' (expected hann or none)");
}

double Spectrum::max_intensity() const {
    return intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
}

double spectral_energy(const Spectrum& s) {
    const std::size_t n = s.padded_length;
    double sum = 0.0;
    for (std::size_t k = 0; k < s.intensity.size(); ++k) {
        const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
        sum += (edge ? 1.0 : 2.0) * s.intensity[k];
    }
    return sum / static_cast<double>(n);
}

Spectrum power_spectrum(std::span<const double> times, std::span<const std::vector<double>> signals, Window window,
                        std::size_t pad_factor, std::size_t min_samples) {
    const std::size_t n = times.size();
    if (n < min_samples)
        throw AnalysisError("trace too short: " + std::to_string(n) + " samples (need >= " +
                            std::to_string(min_samples) + ")");
    if (pad_factor < 1) throw InvalidInput("pad factor must be >= 1");
    const double dt = uniform_step(times);
    const std::vector<double> w = window_values(window, n);

    Spectrum s;
    s.window = window;
    s.pad_factor = pad_factor;
    s.trace_length = n;
    s.padded_length = n * pad_factor;
    s.native_resolution_cm1 = units::hartree_to_wavenumber(2.0 * std::numbers::pi / (static_cast<double>(n) * dt));
    s.intensity.assign(s.padded_length / 2 + 1, 0.0);

    std::vector<double> x(n);
    for (const auto& sig : signals) {
        if (sig.size() != n) throw InvalidInput("signal length does not match the time axis");
        const double mean = std::accumulate(sig.begin(), sig.end(), 0.0) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = (sig[i] - mean) * w[i];
            s.windowed_signal_energy += x[i] * x[i];
        }
        const auto p = real_power(x, s.padded_length);
        for (std::size_t k = 0; k < p.size(); ++k) s.intensity[k] += p[k];
    }
    const double dw = units::hartree_to_wavenumber(2.0 * std::numbers::pi / (static_cast<double>(s.padded_length) * dt));
    s.wavenumbers.resize(s.intensity.size());
    for (std::size_t k = 0; k < s.wavenumbers.size(); ++k) s.wavenumbers[k] = dw * static_cast<double>(k);
    return s;
}

Spectrum ir_spectrum(const Trajectory& traj, const std::string& components, Window window, std::size_t pad_factor) {
    if (components.empty()) throw InvalidInput("no dipole components requested");
    std::vector<std::vector<double>> signals;
    for (char c : components) {
        if (c < 'x' || c > 'z') throw InvalidInput(std::string("unknown dipole component '") + c + "'");
        signals.push_back(traj.dipole_component(c - 'x'));
    }
    Spectrum s = power_spectrum(traj.times, signals, window, pad_factor);
    s.components = components;
    return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence) {
    std::vector<Peak> peaks;
    const double top = s.max_intensity();
    if (!(top > 0.0)) return peaks;
    const auto& y = s.intensity;
    const std::size_t n = y.size();
    const double bin = s.bin_width_cm1();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        const double prominence = (y[i] - std::max(left_min, right_min)) / top;
        if (prominence < min_prominence) continue;
        const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
        const double denom = ym - 2.0 * y0 + yp;
        const double delta = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
        peaks.push_back({(static_cast<double>(i) + delta) * bin, (y0 - 0.25 * (ym - yp) * delta) / top, prominence});
    }
    return peaks;
}

std::vector<Peak> peaks_in_window(const std::vector<Peak>& peaks, double lo, double hi) {
    std::vector<Peak> out;
    std::copy_if(peaks.begin(), peaks.end(), std::back_inserter(out),
                 [&](const Peak& p) { return p.wavenumber >= lo && p.wavenumber <= hi; });
    return out;
}

double rabi_splitting(const Spectrum& s, double center_cm1, double half_window_cm1, double min_prominence) {
    const auto peaks = find_peaks(s, min_prominence);
    const Peak* lower = nullptr;
    const Peak* upper = nullptr;
    for (const auto& p : peaks) {
        if (p.wavenumber >= center_cm1 - half_window_cm1 && p.wavenumber < center_cm1) {
            if (!lower || p.prominence > lower->prominence) lower = &p;
        } else if (p.wavenumber > center_cm1 && p.wavenumber <= center_cm1 + half_window_cm1) {
            if (!upper || p.prominence > upper->prominence) upper = &p;
        }
    }
    if (!lower || !upper) throw AnalysisError("no splitting resolved");
    return upper->wavenumber - lower->wavenumber;
}

double beat_envelope(std::span<const double> times, std::span<const double> trace, double min_depth) {
    const std::size_t n = trace.size();
    if (times.size() != n) throw InvalidInput("trace and time axis differ in length");
    if (n < 64) throw AnalysisError("trace too short for envelope analysis");
    uniform_step(times);
    const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = trace[i] - mean;
        var += x[i] * x[i];
    }
    if (!(var > 0.0)) throw AnalysisError("non-oscillatory input: constant trace");

    const std::vector<double> env_full = analytic_magnitude(x);
    // drop the ends where the periodic Hilbert transform rings
    const std::size_t cut = n / 20;
    const std::span<const double> env(env_full.data() + cut, n - 2 * cut);
    const std::span<const double> t_env(times.data() + cut, n - 2 * cut);
    const double env_mean = std::accumulate(env.begin(), env.end(), 0.0) / static_cast<double>(env.size());
    double env_var = 0.0;
    for (double e : env) env_var += (e - env_mean) * (e - env_mean);
    const double depth = std::sqrt(env_var / static_cast<double>(env.size())) / env_mean;
    if (!(depth >= min_depth))
        throw AnalysisError("non-oscillatory envelope: modulation depth " + std::to_string(depth) +
                            " below " + std::to_string(min_depth));

    const std::vector<std::vector<double>> sig{std::vector<double>(env.begin(), env.end())};
    const Spectrum spec = power_spectrum(t_env, sig, Window::hann, 8, 16);
    // beat must lie above the leakage of the removed mean
    const double floor = 2.0 * spec.native_resolution_cm1;
    const Peak* best = nullptr;
    const auto peaks = find_peaks(spec, 1e-3);
    for (const auto& p : peaks) {
        if (p.wavenumber > floor && (!best || p.height > best->height)) best = &p;
    }
    if (!best) throw AnalysisError("no envelope frequency found");
    return best->wavenumber;
}

EffectiveCouplingTrace effective_coupling_trace(const Trajectory& traj, std::size_t mode, double linear_tol_rad) {
    if (mode >= traj.mode_count()) throw InvalidInput("mode index out of range");
    if (traj.size() == 0) throw InvalidInput("empty trajectory");
    const Vec3 lambda = traj.mode_parameters[mode].lambda;
    const double lam = lambda.norm();
    const Vec3 e = lam > 0.0 ? Vec3(lambda / lam) : Vec3::Zero();

    EffectiveCouplingTrace out;
    out.times = traj.times;
    out.projection.reserve(traj.size());
    for (const auto& mu : traj.dipole) out.projection.push_back(e.dot(mu));

    const auto& p0 = traj.positions.front();
    const auto n = p0.cols();
    if (n < 2) {
        out.notice = "orientation factor omitted: a single atom has no molecular axis";
        return out;
    }
    Eigen::Index ia = 0, ib = 1;
    double best = -1.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (const double d = (p0.col(a) - p0.col(b)).norm(); d > best) {
                best = d;
                ia = a;
                ib = b;
            }
    const Vec3 axis0 = (p0.col(ib) - p0.col(ia)).normalized();
    for (Eigen::Index c = 0; c < n; ++c) {
        if (c == ia || c == ib) continue;
        const Vec3 rel = p0.col(c) - p0.col(ia);
        const double off_axis = std::atan2(rel.cross(axis0).norm(), std::abs(rel.dot(axis0)));
        if (off_axis > linear_tol_rad) {
            out.notice = "orientation factor omitted: molecule is not linear, no unique axis";
            return out;
        }
    }
    std::vector<double> orient;
    orient.reserve(traj.size());
    for (const auto& pos : traj.positions) {
        const Vec3 axis = (pos.col(ib) - pos.col(ia)).normalized();
        orient.push_back(lam * std::abs(axis.dot(e)));
    }
    out.orientation = std::move(orient);
    return out;
}

}  // namespace cavmd
