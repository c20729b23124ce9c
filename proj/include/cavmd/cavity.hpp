#pragma once

#include "cavmd/core_model.hpp"

#include <Eigen/Dense>

#include <span>
#include <variant>

namespace cavmd {

struct NoDrive {
    bool operator==(const NoDrive&) const = default;
};

// amplitude * sin(frequency * t + phase); frequency is angular, Ha.
struct SinusoidDrive {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;

    bool operator==(const SinusoidDrive&) const = default;
};

// Normalized Gaussian pulse centred at `time`; its time integral is `strength`.
struct ImpulseDrive {
    double strength = 0.0;
    double time = 0.0;
    double width = 1.0;  // standard deviation, atomic time units

    bool operator==(const ImpulseDrive&) const = default;
};

class DriveSignal {
public:
    using Kind = std::variant<NoDrive, SinusoidDrive, ImpulseDrive>;

    DriveSignal() = default;
    DriveSignal(Kind kind);  // NOLINT(google-explicit-constructor)

    double value(double t) const;
    double derivative(double t) const;
    bool active() const { return !std::holds_alternative<NoDrive>(kind_); }
    const Kind& kind() const { return kind_; }

    bool operator==(const DriveSignal&) const = default;

private:
    Kind kind_{NoDrive{}};
};

// One quantized cavity mode in mean-field (classical) phase space.
struct PhotonMode {
    double omega = 0.0;           // Ha
    Vec3 lambda = Vec3::Zero();   // coupling vector, atomic units
    double q = 0.0;
    double p = 0.0;
    DriveSignal drive;            // produces j_ext(t)

    // Throws InvalidInput for omega <= 0 or non-finite entries.
    void validate() const;
    double coupling_strength() const { return lambda.norm(); }
};

struct CavityEnergyBreakdown {
    double kinetic_matter = 0.0;
    double potential_ff = 0.0;
    double photon_kinetic = 0.0;
    double photon_potential = 0.0;  // includes the dipole self-energy
    double total = 0.0;

    bool operator==(const CavityEnergyBreakdown&) const = default;
};

// Right-hand side of q'' = -omega^2 q + s:  s = -omega lambda.mu - j_ext(t)/omega.
double photon_source(const PhotonMode& mode, const Vec3& mu, double t);
// d s / d t given d mu / d t.
double photon_source_rate(const PhotonMode& mode, const Vec3& mu_rate, double t);

// F_a = -Q_a sum_alpha (omega q + lambda.mu) lambda, one column per atom.
Eigen::Matrix3Xd cavity_force_on_atoms(std::span<const PhotonMode> modes, const MatterState& m);

// sqrt(4 pi) omega lambda q.
Vec3 displacement_field(const PhotonMode& mode);
Vec3 total_displacement_field(std::span<const PhotonMode> modes);

// 1/2 sum_alpha omega^2 (q + lambda.mu / omega)^2.
double photon_potential_energy(std::span<const PhotonMode> modes, const Vec3& mu);

CavityEnergyBreakdown total_energy(const HarmonicForceField& ff, const MatterState& m,
                                   std::span<const PhotonMode> modes);

struct PhotonPhase {
    double q = 0.0;
    double p = 0.0;
};

// Exact update of q'' = -omega^2 q + s(t) over [t, t + dt] for a source that
// varies linearly from s0 to s1 across the step. Throws InvalidInput for dt <= 0.
PhotonPhase propagate_photon_analytic(const PhotonMode& mode, double s0, double s1, double dt);

// Same, with a cubic Hermite source built from endpoint values and slopes.
PhotonPhase propagate_photon_analytic(const PhotonMode& mode, double s0, double ds0, double s1,
                                      double ds1, double dt);

}  // namespace cavmd
