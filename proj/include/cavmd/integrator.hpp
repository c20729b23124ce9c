#pragma once

#include "cavmd/cavity.hpp"
#include "cavmd/core_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace cavmd {

// External force F_ext(t) * direction on every atom of one species. It enters
// the Hamiltonian as +F_ext . R, so the atoms feel -F_ext.
struct ForceDriveBinding {
    std::string species;
    Vec3 direction = Vec3::UnitX();
    DriveSignal signal;

    bool operator==(const ForceDriveBinding&) const = default;
};

struct IntegrationPlan {
    double dt_fs = 0.1;
    double t_end_fs = 1000.0;
    std::size_t record_stride = 1;
    std::vector<ForceDriveBinding> force_drives;
    std::uint64_t seed = 0;  // recorded only; the integrator itself is deterministic

    void validate() const;
    double dt() const;  // atomic time units
    std::size_t step_count() const;
};

struct SimulationState {
    double time = 0.0;  // atomic time units
    MatterState matter;
    std::vector<PhotonMode> modes;

    void validate() const;
};

// Total force on the nuclei: force field + cavity + external drives.
// Throws NumericalError naming the atom and the term for non-finite values.
Eigen::Matrix3Xd total_force(const SimulationState& state, const HarmonicForceField& ff,
                             const IntegrationPlan& plan);

// One coupled step: half kick, drift, analytic photon update with the dipole
// at both step ends, half kick.
SimulationState step(const SimulationState& state, const HarmonicForceField& ff, const IntegrationPlan& plan);

struct EnergyDriftSummary {
    double initial_total = 0.0;
    double max_abs_deviation = 0.0;  // max_t |E(t) - E(0)|, Ha
    double relative_deviation = 0.0; // max_abs_deviation / |E(0)| (0 when E(0) = 0)
    double final_deviation = 0.0;    // E(t_end) - E(0)
};

struct Trajectory {
    std::vector<std::string> atom_names;
    std::vector<std::string> species_labels;
    std::vector<std::size_t> atom_kind;
    std::vector<PhotonMode> mode_parameters;  // omega, lambda and drive of each mode
    std::uint64_t seed = 0;
    double dt = 0.0;  // integration step, atomic time units
    std::size_t record_stride = 1;

    std::vector<double> times;  // atomic time units
    std::vector<Eigen::Matrix3Xd> positions;
    std::vector<Eigen::Matrix3Xd> velocities;  // empty when loaded from a file
    std::vector<Eigen::VectorXd> photon_q;
    std::vector<Eigen::VectorXd> photon_p;
    std::vector<Vec3> dipole;
    std::vector<CavityEnergyBreakdown> energy;
    std::vector<Eigen::Matrix3Xd> species_position_sum;  // sum over atoms of each species
    EnergyDriftSummary drift;

    std::size_t size() const { return times.size(); }
    std::size_t atom_count() const { return atom_names.size(); }
    std::size_t mode_count() const { return mode_parameters.size(); }
    double sample_interval() const { return dt * static_cast<double>(record_stride); }
    std::vector<double> dipole_component(int axis) const;
    std::vector<double> photon_coordinate(std::size_t mode) const;

    bool operator==(const Trajectory&) const;
};

Trajectory run_trajectory(const SimulationState& state0, const HarmonicForceField& ff, const IntegrationPlan& plan);

}  // namespace cavmd
