#include "cavmd/cavity.hpp"

#include "cavmd/error.hpp"

#include <cmath>
#include <numbers>

namespace cavmd {

DriveSignal::DriveSignal(Kind kind) : kind_(kind) {
    if (const auto* imp = std::get_if<ImpulseDrive>(&kind_); imp && !(imp->width > 0.0))
        throw InvalidInput("impulse drive width must be > 0");
}

double DriveSignal::value(double t) const {
    return std::visit(
        [t](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SinusoidDrive>) {
                return d.amplitude * std::sin(d.frequency * t + d.phase);
            } else if constexpr (std::is_same_v<T, ImpulseDrive>) {
                const double x = (t - d.time) / d.width;
                return d.strength * std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * d.width);
            } else {
                return 0.0;
            }
        },
        kind_);
}

double DriveSignal::derivative(double t) const {
    return std::visit(
        [t](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SinusoidDrive>) {
                return d.amplitude * d.frequency * std::cos(d.frequency * t + d.phase);
            } else if constexpr (std::is_same_v<T, ImpulseDrive>) {
                const double x = (t - d.time) / d.width;
                return -x / d.width * d.strength * std::exp(-0.5 * x * x) /
                       (std::sqrt(2.0 * std::numbers::pi) * d.width);
            } else {
                return 0.0;
            }
        },
        kind_);
}

void PhotonMode::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidInput("photon mode frequency must be > 0");
    if (!lambda.allFinite() || !std::isfinite(q) || !std::isfinite(p))
        throw InvalidInput("photon mode has non-finite state");
}

double photon_source(const PhotonMode& mode, const Vec3& mu, double t) {
    return -mode.omega * mode.lambda.dot(mu) - mode.drive.value(t) / mode.omega;
}

double photon_source_rate(const PhotonMode& mode, const Vec3& mu_rate, double t) {
    return -mode.omega * mode.lambda.dot(mu_rate) - mode.drive.derivative(t) / mode.omega;
}

Eigen::Matrix3Xd cavity_force_on_atoms(std::span<const PhotonMode> modes, const MatterState& m) {
    const auto n = static_cast<Eigen::Index>(m.atom_count());
    Eigen::Matrix3Xd force = Eigen::Matrix3Xd::Zero(3, n);
    if (modes.empty()) return force;
    const Vec3 mu = dipole_moment(m);
    Vec3 field = Vec3::Zero();
    for (const auto& mode : modes) field += (mode.omega * mode.q + mode.lambda.dot(mu)) * mode.lambda;
    for (Eigen::Index a = 0; a < n; ++a) force.col(a) = -m.charge(static_cast<std::size_t>(a)) * field;
    return force;
}

Vec3 displacement_field(const PhotonMode& mode) {
    return std::sqrt(4.0 * std::numbers::pi) * mode.omega * mode.q * mode.lambda;
}

Vec3 total_displacement_field(std::span<const PhotonMode> modes) {
    Vec3 d = Vec3::Zero();
    for (const auto& mode : modes) d += displacement_field(mode);
    return d;
}

double photon_potential_energy(std::span<const PhotonMode> modes, const Vec3& mu) {
    double e = 0.0;
    for (const auto& mode : modes) {
        const double x = mode.omega * mode.q + mode.lambda.dot(mu);
        e += 0.5 * x * x;
    }
    return e;
}

CavityEnergyBreakdown total_energy(const HarmonicForceField& ff, const MatterState& m,
                                   std::span<const PhotonMode> modes) {
    CavityEnergyBreakdown e;
    e.kinetic_matter = m.kinetic_energy();
    e.potential_ff = potential_energy(ff, m);
    for (const auto& mode : modes) e.photon_kinetic += 0.5 * mode.p * mode.p;
    e.photon_potential = modes.empty() ? 0.0 : photon_potential_energy(modes, dipole_moment(m));
    e.total = e.kinetic_matter + e.potential_ff + e.photon_kinetic + e.photon_potential;
    return e;
}

namespace {

// For a cubic source s(tau) the particular solution of q'' + w^2 q = s is
// q_p = s / w^2 - s'' / w^4, with q_p' = s' / w^2 - s''' / w^4. The rest is
// the free rotation of the remaining homogeneous part.
PhotonPhase propagate_polynomial(double omega, double q0, double p0, double dt, const double coef[4]) {
    const double w2 = omega * omega;
    const double w4 = w2 * w2;
    auto s = [&](double t) { return coef[0] + t * (coef[1] + t * (coef[2] + t * coef[3])); };
    auto ds = [&](double t) { return coef[1] + t * (2.0 * coef[2] + 3.0 * t * coef[3]); };
    auto d2s = [&](double t) { return 2.0 * coef[2] + 6.0 * t * coef[3]; };
    const double d3s = 6.0 * coef[3];

    const double qp0 = s(0.0) / w2 - d2s(0.0) / w4;
    const double vp0 = ds(0.0) / w2 - d3s / w4;
    const double qp1 = s(dt) / w2 - d2s(dt) / w4;
    const double vp1 = ds(dt) / w2 - d3s / w4;

    const double a = q0 - qp0;
    const double b = (p0 - vp0) / omega;
    const double c = std::cos(omega * dt);
    const double sn = std::sin(omega * dt);
    return {qp1 + a * c + b * sn, vp1 - a * omega * sn + b * omega * c};
}

void check_step(const PhotonMode& mode, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("photon propagation requires dt > 0");
    if (!(mode.omega > 0.0)) throw InvalidInput("photon mode frequency must be > 0");
}

}  // namespace

PhotonPhase propagate_photon_analytic(const PhotonMode& mode, double s0, double s1, double dt) {
    check_step(mode, dt);
    const double coef[4] = {s0, (s1 - s0) / dt, 0.0, 0.0};
    return propagate_polynomial(mode.omega, mode.q, mode.p, dt, coef);
}

PhotonPhase propagate_photon_analytic(const PhotonMode& mode, double s0, double ds0, double s1, double ds1,
                                      double dt) {
    check_step(mode, dt);
    const double slope = (s1 - s0) / dt;
    const double coef[4] = {s0, ds0, (3.0 * slope - 2.0 * ds0 - ds1) / dt, (ds0 + ds1 - 2.0 * slope) / (dt * dt)};
    return propagate_polynomial(mode.omega, mode.q, mode.p, dt, coef);
}

}  // namespace cavmd
