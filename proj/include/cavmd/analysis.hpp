#pragma once

#include "cavmd/core_model.hpp"
#include "cavmd/integrator.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cavmd {

enum class Window { hann, none };

std::string to_string(Window w);
Window window_from_string(const std::string& name);

struct Spectrum {
    std::vector<double> wavenumbers;  // cm^-1, uniform, starts at 0
    std::vector<double> intensity;    // |FFT|^2 summed over components, one-sided bins 0..N/2
    Window window = Window::hann;
    std::size_t pad_factor = 1;
    std::size_t trace_length = 0;     // samples before padding
    std::size_t padded_length = 0;
    double native_resolution_cm1 = 0.0;  // 1 / (trace duration), cm^-1
    std::string components;              // e.g. "xyz"
    double windowed_signal_energy = 0.0; // sum of squared windowed samples

    double bin_width_cm1() const { return wavenumbers.size() > 1 ? wavenumbers[1] - wavenumbers[0] : 0.0; }
    double max_intensity() const;
};

// Parseval counterpart of windowed_signal_energy: (|X_0|^2 + 2 sum |X_k|^2 + |X_N/2|^2) / N.
double spectral_energy(const Spectrum& s);

// Power spectrum of one or more equally sampled real signals (each
// mean-subtracted and windowed, then summed in power). `times` in atomic units.
Spectrum power_spectrum(std::span<const double> times, std::span<const std::vector<double>> signals,
                        Window window = Window::hann, std::size_t pad_factor = 4,
                        std::size_t min_samples = 256);

// IR spectrum from the dipole components named in `components` (subset of "xyz").
Spectrum ir_spectrum(const Trajectory& traj, const std::string& components = "xyz", Window window = Window::hann,
                     std::size_t pad_factor = 4);

struct Peak {
    double wavenumber = 0.0;  // cm^-1, refined by a 3-point parabola
    double height = 0.0;      // relative to the spectrum maximum
    double prominence = 0.0;  // relative to the spectrum maximum
};

// Local maxima whose prominence, as a fraction of the spectrum maximum,
// reaches `min_prominence`. Sorted by wavenumber.
std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence = 0.01);

// Peaks inside [lo, hi] cm^-1.
std::vector<Peak> peaks_in_window(const std::vector<Peak>& peaks, double lo, double hi);

// Upper minus lower polariton: the most prominent peak on each side of
// `center_cm1` within +-`half_window_cm1`. Throws AnalysisError ("no
// splitting resolved") when a side is empty.
double rabi_splitting(const Spectrum& s, double center_cm1, double half_window_cm1 = 300.0,
                      double min_prominence = 0.01);

// Dominant frequency (cm^-1) of the analytic-signal magnitude of `trace`.
// Throws AnalysisError for a constant trace or when the envelope modulation
// depth is below `min_depth` (a single tone).
double beat_envelope(std::span<const double> times, std::span<const double> trace, double min_depth = 0.05);

struct EffectiveCouplingTrace {
    std::vector<double> times;
    std::vector<double> projection;                  // e_alpha . mu(t), e*bohr
    std::optional<std::vector<double>> orientation;  // |lambda| |cos theta(t)|
    std::string notice;                              // why orientation is missing
};

// Instantaneous coupling of a (possibly rotating) linear molecule to mode
// `mode`. The molecular axis joins the two atoms farthest apart in the first
// frame; molecules that are not linear within `linear_tol_rad` get no
// orientation trace.
EffectiveCouplingTrace effective_coupling_trace(const Trajectory& traj, std::size_t mode,
                                                double linear_tol_rad = 0.2);

}  // namespace cavmd
