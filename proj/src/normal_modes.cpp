#include "cavmd/normal_modes.hpp"

#include "cavmd/error.hpp"
#include "cavmd/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cavmd {

namespace {

Eigen::MatrixXd fd_hessian(const HarmonicForceField& ff, const MatterState& m_eq, double step) {
    const auto dim = static_cast<Eigen::Index>(3 * m_eq.atom_count());
    Eigen::MatrixXd h(dim, dim);
    MatterState probe = m_eq;
    for (Eigen::Index col = 0; col < dim; ++col) {
        double& x = probe.positions.data()[col];
        const double x0 = x;
        x = x0 + step;
        const Eigen::Matrix3Xd f_plus = matter_forces(ff, probe);
        x = x0 - step;
        const Eigen::Matrix3Xd f_minus = matter_forces(ff, probe);
        x = x0;
        h.col(col) = -(f_plus - f_minus).reshaped() / (2.0 * step);
    }
    return h;
}

double signed_wavenumber(double eigenvalue) {
    const double w = std::sqrt(std::abs(eigenvalue));
    return units::hartree_to_wavenumber(eigenvalue < 0.0 ? -w : w);
}

}  // namespace

HessianResult hessian_fd(const HarmonicForceField& ff, const MatterState& m_eq, double step, double max_force) {
    if (!(step > 0.0)) throw InvalidInput("finite-difference step must be > 0");
    const double fmax = matter_forces(ff, m_eq).cwiseAbs().maxCoeff();
    if (fmax > max_force) {
        std::ostringstream os;
        os << "geometry is not at a force-field minimum: max |F| = " << fmax << " Ha/bohr (limit " << max_force
           << ")";
        throw NumericalError(os.str());
    }
    HessianResult out;
    const Eigen::MatrixXd h = fd_hessian(ff, m_eq, step);
    const Eigen::MatrixXd h_half = fd_hessian(ff, m_eq, 0.5 * step);
    out.symmetry_defect = (h - h.transpose()).cwiseAbs().maxCoeff();
    out.richardson_defect = (h - h_half).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd extrapolated = (4.0 * h_half - h) / 3.0;
    out.hessian = 0.5 * (extrapolated + extrapolated.transpose());
    return out;
}

Eigen::Matrix3Xd NormalModeSet::cartesian_displacement(std::size_t k, std::span<const double> masses) const {
    const auto n = static_cast<Eigen::Index>(masses.size());
    Eigen::Matrix3Xd d(3, n);
    const auto col = eigenvectors.col(static_cast<Eigen::Index>(k));
    for (Eigen::Index a = 0; a < n; ++a) d.col(a) = col.segment<3>(3 * a) / std::sqrt(masses[a]);
    return d;
}

NormalModeSet normal_modes(const Eigen::MatrixXd& hessian, std::span<const double> masses,
                           const Eigen::Matrix3Xd* dipole_jac) {
    const auto dim = static_cast<Eigen::Index>(3 * masses.size());
    if (hessian.rows() != dim || hessian.cols() != dim)
        throw InvalidInput("Hessian dimension does not match 3 x atom count");
    if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, hessian.cwiseAbs().maxCoeff()))
        throw InvalidInput("Hessian is not symmetric");

    Eigen::VectorXd inv_sqrt_m(dim);
    for (Eigen::Index i = 0; i < dim; ++i) inv_sqrt_m[i] = 1.0 / std::sqrt(masses[i / 3]);
    const Eigen::MatrixXd mw = inv_sqrt_m.asDiagonal() * hessian * inv_sqrt_m.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mw);
    if (solver.info() != Eigen::Success) throw NumericalError("normal-mode eigensolver failed");

    NormalModeSet out;
    out.eigenvectors = solver.eigenvectors();
    out.frequencies_cm1 = solver.eigenvalues().unaryExpr(&signed_wavenumber);
    out.ir_intensity = Eigen::VectorXd::Zero(dim);
    if (dipole_jac) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Eigen::VectorXd cart = inv_sqrt_m.cwiseProduct(out.eigenvectors.col(k));
            out.ir_intensity[k] = (*dipole_jac * cart).squaredNorm();
        }
    }
    return out;
}

Eigen::MatrixXd rigid_body_basis(const MatterState& m, double tol) {
    const auto n = static_cast<Eigen::Index>(m.atom_count());
    const Vec3 com = m.center_of_mass();
    std::vector<Eigen::VectorXd> raw;
    for (int d = 0; d < 3; ++d) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * n);
        for (Eigen::Index a = 0; a < n; ++a) v[3 * a + d] = std::sqrt(m.mass(static_cast<std::size_t>(a)));
        raw.push_back(v);
    }
    for (int d = 0; d < 3; ++d) {
        Eigen::VectorXd v(3 * n);
        const Vec3 axis = Vec3::Unit(d);
        for (Eigen::Index a = 0; a < n; ++a)
            v.segment<3>(3 * a) = std::sqrt(m.mass(static_cast<std::size_t>(a))) *
                                  axis.cross(Vec3(m.positions.col(a) - com));
        raw.push_back(v);
    }
    std::vector<Eigen::VectorXd> basis;
    for (auto v : raw) {
        const double scale = v.norm();
        if (scale == 0.0) continue;
        for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > tol * scale) basis.push_back(v.normalized());
    }
    Eigen::MatrixXd out(3 * n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
    return out;
}

PolaritonModel polariton_frequencies(const Eigen::MatrixXd& hessian, const MatterState& m_eq,
                                     std::span<const PhotonMode> modes, bool include_self_energy,
                                     bool project_rigid) {
    const auto dim = static_cast<Eigen::Index>(3 * m_eq.atom_count());
    if (hessian.rows() != dim || hessian.cols() != dim)
        throw InvalidInput("Hessian dimension does not match 3 x atom count");
    for (const auto& mode : modes) {
        if (!(mode.omega > 0.0)) throw InvalidInput("polariton model requires positive photon frequencies");
    }
    const auto n_modes = static_cast<Eigen::Index>(modes.size());

    Eigen::VectorXd inv_sqrt_m(dim);
    for (Eigen::Index i = 0; i < dim; ++i) inv_sqrt_m[i] = 1.0 / std::sqrt(m_eq.mass(static_cast<std::size_t>(i / 3)));
    const Eigen::MatrixXd hmw = inv_sqrt_m.asDiagonal() * hessian * inv_sqrt_m.asDiagonal();
    const Eigen::MatrixXd jac_mw = dipole_jacobian(m_eq) * inv_sqrt_m.asDiagonal();

    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim);
    if (project_rigid) {
        const Eigen::MatrixXd b = rigid_body_basis(m_eq);
        proj -= b * b.transpose();
    }

    Eigen::MatrixXd self_energy = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd coupling(dim, n_modes);
    for (Eigen::Index k = 0; k < n_modes; ++k) {
        const auto& mode = modes[static_cast<std::size_t>(k)];
        const Eigen::VectorXd grad = proj * (jac_mw.transpose() * mode.lambda);  // d(lambda.mu)/dQ
        coupling.col(k) = mode.omega * grad;
        self_energy += grad * grad.transpose();
    }
    self_energy = 0.5 * (self_energy + self_energy.transpose()).eval();

    PolaritonModel out;
    out.matter_dim = static_cast<std::size_t>(dim);
    Eigen::MatrixXd matter = proj * hmw * proj;
    matter = 0.5 * (matter + matter.transpose()).eval();
    out.self_energy_trace = self_energy.trace();
    out.uncoupled_trace = matter.trace();
    out.matrix = Eigen::MatrixXd::Zero(dim + n_modes, dim + n_modes);
    out.matrix.topLeftCorner(dim, dim) = matter;
    if (include_self_energy) out.matrix.topLeftCorner(dim, dim) += self_energy;
    out.matrix.topRightCorner(dim, n_modes) = coupling;
    out.matrix.bottomLeftCorner(n_modes, dim) = coupling.transpose();
    for (Eigen::Index k = 0; k < n_modes; ++k) {
        const double w = modes[static_cast<std::size_t>(k)].omega;
        out.matrix(dim + k, dim + k) = w * w;
        out.uncoupled_trace += w * w;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.matrix);
    if (solver.info() != Eigen::Success) throw NumericalError("polariton eigensolver failed");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.frequencies_cm1 = out.eigenvalues.unaryExpr(&signed_wavenumber);
    out.photon_weight = out.eigenvectors.bottomRows(n_modes).colwise().squaredNorm().transpose();
    out.matter_weight = Eigen::VectorXd::Ones(out.photon_weight.size()) - out.photon_weight;
    return out;
}

double oracle_rabi_splitting(const PolaritonModel& model, double min_photon_weight) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(model.photon_weight.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return model.photon_weight[a] > model.photon_weight[b]; });
    if (order.size() < 2 || model.photon_weight[order[1]] < min_photon_weight)
        throw AnalysisError("no splitting resolved: fewer than two hybrid light-matter eigenvectors");
    const double f0 = model.frequencies_cm1[order[0]];
    const double f1 = model.frequencies_cm1[order[1]];
    return std::abs(f0 - f1);
}

}  // namespace cavmd
