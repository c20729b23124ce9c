#pragma once

#include "cavmd/cavity.hpp"
#include "cavmd/core_model.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cavmd {

struct HessianResult {
    Eigen::MatrixXd hessian;         // 3N x 3N, Ha/bohr^2, symmetrized
    double symmetry_defect = 0.0;    // max |H - H^T| before symmetrization
    double richardson_defect = 0.0;  // max |H(step) - H(step/2)|
};

// Central differences of matter_forces at `step` and `step`/2, combined by
// Richardson extrapolation. Throws NumericalError when the
// largest force component exceeds `max_force` (not at a minimum).
HessianResult hessian_fd(const HarmonicForceField& ff, const MatterState& m_eq,
                         double step = 1e-3, double max_force = 1e-6);

struct NormalModeSet {
    Eigen::VectorXd frequencies_cm1;  // ascending by eigenvalue; imaginary as negative
    Eigen::MatrixXd eigenvectors;     // mass-weighted, one column per mode
    Eigen::VectorXd ir_intensity;     // |d mu / d Q|^2 per mode, e^2 / m_e

    std::size_t size() const { return static_cast<std::size_t>(frequencies_cm1.size()); }
    // Cartesian displacement pattern of mode `k` (M^{-1/2} e_k), 3 x N.
    Eigen::Matrix3Xd cartesian_displacement(std::size_t k, std::span<const double> masses) const;
};

// Eigendecomposition of M^{-1/2} H M^{-1/2}. `masses` are per atom;
// `dipole_jac` (3 x 3N, optional) fills the IR-intensity proxy.
NormalModeSet normal_modes(const Eigen::MatrixXd& hessian, std::span<const double> masses,
                           const Eigen::Matrix3Xd* dipole_jac = nullptr);

// Orthonormal basis (columns) of rigid translations and rotations in
// mass-weighted coordinates. Linear molecules give 5 columns.
Eigen::MatrixXd rigid_body_basis(const MatterState& m, double tol = 1e-8);

struct PolaritonModel {
    Eigen::MatrixXd matrix;            // (3N + modes) square, symmetric, Ha^2
    Eigen::VectorXd eigenvalues;       // squared angular frequencies, ascending
    Eigen::VectorXd frequencies_cm1;   // signed sqrt of eigenvalues
    Eigen::MatrixXd eigenvectors;      // columns
    Eigen::VectorXd photon_weight;     // squared norm on the photon block
    Eigen::VectorXd matter_weight;     // 1 - photon_weight
    double self_energy_trace = 0.0;    // trace of the projected self-energy block
    double uncoupled_trace = 0.0;      // trace of projected Hessian + sum of omega^2
    std::size_t matter_dim = 0;
};

// Linearized coupled matter-photon problem about the equilibrium geometry of
// `m_eq`: mass-weighted Hessian plus dipole self-energy curvature, bilinear
// omega * lambda . d mu / dR coupling, and omega^2 photon block. Rigid-body
// motions are projected out of the matter block unless `project_rigid` is false.
PolaritonModel polariton_frequencies(const Eigen::MatrixXd& hessian, const MatterState& m_eq,
                                     std::span<const PhotonMode> modes,
                                     bool include_self_energy = true, bool project_rigid = true);

// Upper minus lower polariton (cm^-1): the two eigenvectors with the largest
// photon weight. Throws AnalysisError when fewer than two carry weight.
double oracle_rabi_splitting(const PolaritonModel& model, double min_photon_weight = 0.05);

}  // namespace cavmd
