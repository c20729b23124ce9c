#include "cavmd/analysis.hpp"
#include "cavmd/error.hpp"
#include "cavmd/units.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cavmd;

namespace {

// Angular frequency (Ha) of a wavenumber.
double w_of(double cm1) { return units::wavenumber_to_hartree(cm1); }

std::vector<double> time_axis(std::size_t n, double dt_fs = 1.0) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = units::fs_to_atomic(dt_fs * static_cast<double>(i));
    return t;
}

std::vector<double> tones(const std::vector<double>& t, std::initializer_list<std::pair<double, double>> parts) {
    std::vector<double> x(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (const auto& [cm1, amp] : parts) x[i] += amp * std::cos(w_of(cm1) * t[i]);
    return x;
}

Trajectory dipole_trajectory(const std::vector<double>& t, const std::vector<double>& mux) {
    Trajectory traj;
    traj.times = t;
    for (double v : mux) traj.dipole.emplace_back(v, 0.0, 0.0);
    return traj;
}

}  // namespace

TEST_CASE("window names") {
    CHECK(to_string(Window::hann) == "hann");
    CHECK(window_from_string("none") == Window::none);
    CHECK_THROWS_AS(window_from_string("blackman"), InvalidInput);
}

TEST_CASE("single cosine gives one peak in the right bin") {
    const auto t = time_axis(5000);
    const auto traj = dipole_trajectory(t, tones(t, {{1000.0, 1.0}}));
    const auto s = ir_spectrum(traj, "x");
    CHECK(s.native_resolution_cm1 == doctest::Approx(6.67).epsilon(1e-3));
    CHECK(s.bin_width_cm1() == doctest::Approx(s.native_resolution_cm1 / 4));
    for (std::size_t k = 1; k < s.wavenumbers.size(); ++k) CHECK(s.wavenumbers[k] > s.wavenumbers[k - 1]);
    for (double v : s.intensity) CHECK(v >= 0.0);
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].wavenumber - 1000.0) < s.native_resolution_cm1);
    CHECK(peaks[0].height == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("single tones are located within a quarter native bin") {
    const auto t = time_axis(4096, 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(300.0, 3000.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double nu = u(rng);
        const std::vector<std::vector<double>> sig{tones(t, {{nu, 1.0}})};
        for (std::size_t pad : {1, 4}) {
            const auto s = power_spectrum(t, sig, Window::hann, pad);
            const auto peaks = find_peaks(s);
            REQUIRE(peaks.size() == 1);
            CHECK(std::abs(peaks[0].wavenumber - nu) < 0.25 * s.native_resolution_cm1);
        }
    }
}

TEST_CASE("parseval identity") {
    const auto t = time_axis(3001, 0.7);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> a(t.size()), b(t.size());
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = 2.0 + g(rng);
    const std::vector<std::vector<double>> sig{a, b};
    for (Window w : {Window::hann, Window::none})
        for (std::size_t pad : {1, 2, 4}) {
            const auto s = power_spectrum(t, sig, w, pad);
            CHECK(spectral_energy(s) == doctest::Approx(s.windowed_signal_energy).epsilon(1e-10));
        }
}

TEST_CASE("input validation") {
    auto t = time_axis(100);
    const std::vector<std::vector<double>> short_sig{std::vector<double>(100, 0.0)};
    CHECK_THROWS_AS(power_spectrum(t, short_sig), AnalysisError);
    t = time_axis(400);
    t[200] += 0.3;
    const std::vector<std::vector<double>> sig{std::vector<double>(400, 0.0)};
    CHECK_THROWS_AS(power_spectrum(t, sig), AnalysisError);
    const auto ok = time_axis(400);
    const auto traj = dipole_trajectory(ok, std::vector<double>(400, 0.0));
    CHECK_THROWS_AS(ir_spectrum(traj, "w"), InvalidInput);
}

TEST_CASE("flat spectrum has no peaks") {
    Spectrum s;
    s.wavenumbers = {0, 1, 2, 3, 4, 5};
    s.intensity = std::vector<double>(6, 2.0);
    CHECK(find_peaks(s).empty());
    s.intensity = std::vector<double>(6, 0.0);
    CHECK(find_peaks(s).empty());
}

TEST_CASE("prominence threshold is relative to the maximum") {
    const auto t = time_axis(5000);
    const auto traj = dipole_trajectory(t, tones(t, {{800.0, 1.0}, {1600.0, 0.05}}));
    const auto s = ir_spectrum(traj, "x");
    // power ratio of the two tones is 0.05^2
    CHECK(find_peaks(s, 0.001).size() == 2);
    CHECK(find_peaks(s, 0.001).back().prominence == doctest::Approx(0.0025).epsilon(0.05));
    CHECK(find_peaks(s, 0.01).size() == 1);
    const auto all = find_peaks(s, 0.001);
    CHECK(peaks_in_window(all, 700, 900).size() == 1);
}

TEST_CASE("rabi splitting from a two-peak spectrum") {
    const auto t = time_axis(5000);
    const auto traj = dipole_trajectory(t, tones(t, {{2395.0, 1.0}, {2465.0, 0.9}, {654.0, 0.5}}));
    const auto s = ir_spectrum(traj, "x");
    CHECK(rabi_splitting(s, 2430.0) == doctest::Approx(70.0).epsilon(0.02));
    const auto single = ir_spectrum(dipole_trajectory(t, tones(t, {{2430.0, 1.0}})), "x");
    try {
        rabi_splitting(single, 2430.0);
        FAIL("expected AnalysisError");
    } catch (const AnalysisError& e) {
        CHECK(std::string(e.what()) == "no splitting resolved");
    }
}

TEST_CASE("beat envelope of two tones") {
    const auto t = time_axis(5000);
    const auto x = tones(t, {{2405.0, 1.0}, {2455.0, 1.0}});
    CHECK(beat_envelope(t, x) == doctest::Approx(50.0).epsilon(0.13));
    const auto y = tones(t, {{2380.0, 1.0}, {2480.0, 0.6}});
    CHECK(std::abs(beat_envelope(t, y) - 100.0) < 6.67);

    CHECK_THROWS_AS(beat_envelope(t, tones(t, {{2430.0, 1.0}})), AnalysisError);
    CHECK_THROWS_AS(beat_envelope(t, std::vector<double>(t.size(), 1.0)), AnalysisError);
}

TEST_CASE("effective coupling orientation factor") {
    Trajectory traj;
    PhotonMode mode;
    mode.omega = 0.011;
    mode.lambda = Vec3(0.05, 0, 0);
    traj.mode_parameters.push_back(mode);
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / (n - 1);
        const Vec3 axis(std::cos(phi), std::sin(phi), 0.0);
        Eigen::Matrix3Xd pos(3, 3);
        pos.col(0) = Vec3::Zero();
        pos.col(1) = -2.2 * axis;
        pos.col(2) = 2.2 * axis;
        traj.times.push_back(i);
        traj.positions.push_back(pos);
        traj.dipole.emplace_back(0.1 * std::cos(phi), 0.3, 0.0);
    }
    const auto tr = effective_coupling_trace(traj, 0);
    REQUIRE(tr.orientation);
    CHECK((*tr.orientation)[0] == doctest::Approx(0.05));
    CHECK((*tr.orientation)[n / 4] < 2e-3);
    double lo = 1.0, hi = 0.0;
    for (double v : *tr.orientation) {
        CHECK(v >= 0.0);
        CHECK(v <= 0.05 + 1e-15);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo > 0.9 * 0.05);
    CHECK(tr.projection[0] == doctest::Approx(0.1));

    auto perp = traj;
    perp.mode_parameters[0].lambda = Vec3(0, 0, 0.05);
    const auto tz = effective_coupling_trace(perp, 0);
    for (double v : *tz.orientation) CHECK(v == doctest::Approx(0.0).scale(1.0));

    auto bent = traj;
    bent.positions[0].col(0) = Vec3(0.0, 0.0, 1.5);
    const auto tb = effective_coupling_trace(bent, 0);
    CHECK_FALSE(tb.orientation);
    CHECK_FALSE(tb.notice.empty());
    CHECK_THROWS_AS(effective_coupling_trace(traj, 3), InvalidInput);
}
