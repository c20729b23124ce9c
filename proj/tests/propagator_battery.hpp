#pragma once

// Driven-oscillator battery shared by the propagator unit tests and the
// acceptance suite: analytic propagation against an adaptive Runge-Kutta-
// Fehlberg 7(8) reference.

#include "cavmd/cavity.hpp"
#include "cavmd/units.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace battery {

struct Case {
    std::string name;
    double q0 = 0.0, p0 = 0.0;
    std::function<double(double)> source;
    std::function<double(double)> source_rate;
};

inline double omega_2430() { return cavmd::units::wavenumber_to_hartree(2430.0); }

inline std::vector<Case> standard_cases() {
    const double w = omega_2430();
    const double amp = 1e-3 * w * w;
    return {
        {"free", 1.0, 0.0, [](double) { return 0.0; }, [](double) { return 0.0; }},
        {"constant source", 0.0, 0.0, [amp](double) { return amp; }, [](double) { return 0.0; }},
        {"resonant sinusoid", 0.0, 0.0, [amp, w](double t) { return amp * std::sin(w * t); },
         [amp, w](double t) { return amp * w * std::cos(w * t); }},
    };
}

enum class Kernel { linear, hermite };

// Max over all steps of |z - z_ref| / max |z_ref| with z = (q, p / omega).
inline double relative_error(const Case& c, double omega, double dt, int periods, Kernel kernel) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double period = 2.0 * std::numbers::pi / omega;
    const long steps_per_period = std::lround(period / dt);
    const double h = period / static_cast<double>(steps_per_period);

    cavmd::PhotonMode mode;
    mode.omega = omega;
    mode.q = c.q0;
    mode.p = c.p0;

    State ref{c.q0, c.p0};
    auto rhs = [&](const State& x, State& dxdt, double t) {
        dxdt[0] = x[1];
        dxdt[1] = -omega * omega * x[0] + c.source(t);
    };
    auto stepper = odeint::make_controlled(1e-15, 1e-15, odeint::runge_kutta_fehlberg78<State>());

    double max_err = 0.0, max_ref = 0.0;
    double t = 0.0;
    for (int k = 0; k < periods; ++k) {
        for (long i = 0; i < steps_per_period; ++i) {
            const double t0 = t, t1 = t + h;
            const cavmd::PhotonPhase next =
                kernel == Kernel::linear
                    ? cavmd::propagate_photon_analytic(mode, c.source(t0), c.source(t1), h)
                    : cavmd::propagate_photon_analytic(mode, c.source(t0), c.source_rate(t0), c.source(t1),
                                                       c.source_rate(t1), h);
            mode.q = next.q;
            mode.p = next.p;
            odeint::integrate_adaptive(stepper, rhs, ref, t0, t1, h);
            t = t1;
            max_ref = std::max(max_ref, std::hypot(ref[0], ref[1] / omega));
            max_err = std::max(max_err, std::hypot(mode.q - ref[0], (mode.p - ref[1]) / omega));
        }
    }
    return max_err / max_ref;
}

}  // namespace battery
