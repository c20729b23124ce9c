#include "cavmd/core_model.hpp"

#include "cavmd/error.hpp"
#include "cavmd/normal_modes.hpp"
#include "cavmd/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace cavmd {

MatterState::MatterState(std::vector<AtomicSpecies> species_in, std::vector<std::size_t> kind_in,
                         Eigen::Matrix3Xd positions_in)
    : species(std::move(species_in)),
      kind(std::move(kind_in)),
      positions(std::move(positions_in)),
      velocities(Eigen::Matrix3Xd::Zero(3, positions.cols())) {
    validate();
}

Eigen::VectorXd MatterState::masses() const {
    Eigen::VectorXd out(atom_count());
    for (std::size_t a = 0; a < atom_count(); ++a) out[a] = mass(a);
    return out;
}

Eigen::VectorXd MatterState::charges() const {
    Eigen::VectorXd out(atom_count());
    for (std::size_t a = 0; a < atom_count(); ++a) out[a] = charge(a);
    return out;
}

double MatterState::total_charge() const { return charges().sum(); }
double MatterState::total_mass() const { return masses().sum(); }

Vec3 MatterState::center_of_mass() const {
    Vec3 acc = Vec3::Zero();
    for (std::size_t a = 0; a < atom_count(); ++a) acc += mass(a) * positions.col(a);
    return acc / total_mass();
}

Vec3 MatterState::linear_momentum() const {
    Vec3 acc = Vec3::Zero();
    for (std::size_t a = 0; a < atom_count(); ++a) acc += mass(a) * velocities.col(a);
    return acc;
}

double MatterState::kinetic_energy() const {
    double ke = 0.0;
    for (std::size_t a = 0; a < atom_count(); ++a) ke += 0.5 * mass(a) * velocities.col(a).squaredNorm();
    return ke;
}

std::string MatterState::atom_name(std::size_t atom) const {
    const std::size_t k = kind.at(atom);
    const auto total = static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k));
    if (total == 1) return species[k].label;
    const auto ordinal = static_cast<std::size_t>(std::count(kind.begin(), kind.begin() + atom, k)) + 1;
    return species[k].label + std::to_string(ordinal);
}

std::optional<std::size_t> MatterState::find_species(const std::string& label) const {
    for (std::size_t s = 0; s < species.size(); ++s)
        if (species[s].label == label) return s;
    return std::nullopt;
}

void MatterState::validate() const {
    if (kind.empty()) throw InvalidInput("matter state has no atoms");
    if (positions.cols() != static_cast<Eigen::Index>(kind.size()) ||
        velocities.cols() != static_cast<Eigen::Index>(kind.size()))
        throw InvalidInput("matter state: positions/velocities do not match the atom count");
    std::set<std::string> labels;
    for (const auto& s : species) {
        if (!(s.mass > 0.0) || !std::isfinite(s.mass))
            throw InvalidInput("species '" + s.label + "' must have a positive mass");
        if (!std::isfinite(s.charge)) throw InvalidInput("species '" + s.label + "' has a non-finite charge");
        if (!labels.insert(s.label).second) throw InvalidInput("duplicate species label '" + s.label + "'");
    }
    for (std::size_t a = 0; a < kind.size(); ++a) {
        if (kind[a] >= species.size())
            throw InvalidInput("atom " + std::to_string(a) + " references an unknown species");
    }
    if (!positions.allFinite() || !velocities.allFinite())
        throw InvalidInput("matter state has non-finite coordinates");
}

namespace {

void check_index(std::size_t idx, std::size_t n, const char* what) {
    if (idx >= n) {
        std::ostringstream os;
        os << what << " index " << idx << " out of range for " << n << " atoms";
        throw InvalidInput(os.str());
    }
}

struct BondGeometry {
    double length;
    Vec3 unit;  // from j to i
};

BondGeometry bond_geometry(const MatterState& m, const BondTerm& b) {
    const Vec3 d = m.positions.col(b.i) - m.positions.col(b.j);
    const double r = d.norm();
    if (!(r > 0.0)) throw NumericalError("bond between coincident atoms");
    return {r, d / r};
}

struct AngleGeometry {
    double deviation;    // theta - theta0
    double grad_factor;  // (theta - theta0) / sin(theta), finite at a linear reference
    double cos_theta;
    Vec3 u_hat, v_hat;
    double u_len, v_len;
};

AngleGeometry angle_geometry(const MatterState& m, const AngleTerm& t) {
    const Vec3 u = m.positions.col(t.i) - m.positions.col(t.j);
    const Vec3 v = m.positions.col(t.k) - m.positions.col(t.j);
    AngleGeometry g{};
    g.u_len = u.norm();
    g.v_len = v.norm();
    if (!(g.u_len > 0.0) || !(g.v_len > 0.0)) throw NumericalError("angle with coincident atoms");
    g.u_hat = u / g.u_len;
    g.v_hat = v / g.v_len;
    const double c = g.u_hat.dot(g.v_hat);
    const double s = g.u_hat.cross(g.v_hat).norm();
    g.cos_theta = c;
    constexpr double pi = std::numbers::pi;
    double sin_theta = s;
    if (t.theta0 > 0.5 * pi) {
        // Measure from the supplement so a linear reference keeps full precision.
        const double bend = std::atan2(s, -c);  // pi - theta
        g.deviation = (pi - t.theta0) - bend;
        if (s < 1e-8) {
            // (theta - theta0) / sin(theta) -> -bend / sin(bend) -> -1 when theta0 = pi
            g.grad_factor = std::abs(pi - t.theta0) < 1e-12 ? -1.0 : g.deviation / std::max(s, 1e-300);
            return g;
        }
    } else {
        g.deviation = std::atan2(s, c) - t.theta0;
        if (s < 1e-8) {
            g.grad_factor = std::abs(t.theta0) < 1e-12 ? 1.0 : g.deviation / std::max(s, 1e-300);
            return g;
        }
    }
    g.grad_factor = g.deviation / sin_theta;
    return g;
}

}  // namespace

void HarmonicForceField::validate(std::size_t atom_count) const {
    for (const auto& b : bonds) {
        check_index(b.i, atom_count, "bond");
        check_index(b.j, atom_count, "bond");
        if (b.i == b.j) throw InvalidInput("bond connects an atom to itself");
        if (b.stiffness < 0.0) throw InvalidInput("bond stiffness must be >= 0");
    }
    for (const auto& t : angles) {
        check_index(t.i, atom_count, "angle");
        check_index(t.j, atom_count, "angle");
        check_index(t.k, atom_count, "angle");
        if (t.i == t.j || t.j == t.k || t.i == t.k) throw InvalidInput("angle uses repeated atoms");
        if (t.stiffness < 0.0) throw InvalidInput("angle stiffness must be >= 0");
    }
    for (const auto& c : couplings) {
        if (c.bond_a >= bonds.size() || c.bond_b >= bonds.size())
            throw InvalidInput("bond coupling references a bond index out of range");
    }
}

double potential_energy(const HarmonicForceField& ff, const MatterState& m) {
    ff.validate(m.atom_count());
    std::vector<double> stretch(ff.bonds.size());
    double energy = 0.0;
    for (std::size_t n = 0; n < ff.bonds.size(); ++n) {
        const auto& b = ff.bonds[n];
        stretch[n] = bond_geometry(m, b).length - b.r0;
        energy += 0.5 * b.stiffness * stretch[n] * stretch[n];
    }
    for (const auto& t : ff.angles) {
        const auto g = angle_geometry(m, t);
        energy += 0.5 * t.stiffness * g.deviation * g.deviation;
    }
    for (const auto& c : ff.couplings) energy += c.stiffness * stretch[c.bond_a] * stretch[c.bond_b];
    return energy;
}

Eigen::Matrix3Xd matter_forces(const HarmonicForceField& ff, const MatterState& m) {
    ff.validate(m.atom_count());
    Eigen::Matrix3Xd gradient = Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(m.atom_count()));

    std::vector<BondGeometry> geo;
    geo.reserve(ff.bonds.size());
    std::vector<double> stretch(ff.bonds.size());
    // dV/d(stretch) per bond, accumulated from harmonic and cross terms
    std::vector<double> dvdr(ff.bonds.size(), 0.0);
    for (std::size_t n = 0; n < ff.bonds.size(); ++n) {
        geo.push_back(bond_geometry(m, ff.bonds[n]));
        stretch[n] = geo[n].length - ff.bonds[n].r0;
        dvdr[n] += ff.bonds[n].stiffness * stretch[n];
    }
    for (const auto& c : ff.couplings) {
        dvdr[c.bond_a] += c.stiffness * stretch[c.bond_b];
        dvdr[c.bond_b] += c.stiffness * stretch[c.bond_a];
    }
    for (std::size_t n = 0; n < ff.bonds.size(); ++n) {
        const auto& b = ff.bonds[n];
        gradient.col(b.i) += dvdr[n] * geo[n].unit;
        gradient.col(b.j) -= dvdr[n] * geo[n].unit;
    }

    for (const auto& t : ff.angles) {
        const auto g = angle_geometry(m, t);
        const double scale = -t.stiffness * g.grad_factor;
        const Vec3 gi = scale * (g.v_hat - g.cos_theta * g.u_hat) / g.u_len;
        const Vec3 gk = scale * (g.u_hat - g.cos_theta * g.v_hat) / g.v_len;
        gradient.col(t.i) += gi;
        gradient.col(t.k) += gk;
        gradient.col(t.j) -= gi + gk;
    }
    return -gradient;
}

Vec3 dipole_moment(const MatterState& m) {
    const double q_total = m.total_charge();
    Vec3 origin = Vec3::Zero();
    if (std::abs(q_total) > 1e-12) {
        if (!m.dipole_origin)
            throw InvalidInput("dipole of a charged system (total charge " + std::to_string(q_total) +
                               ") is origin dependent; configure an explicit dipole origin");
        origin = *m.dipole_origin;
    }
    Vec3 mu = Vec3::Zero();
    for (std::size_t a = 0; a < m.atom_count(); ++a) mu += m.charge(a) * (m.positions.col(a) - origin);
    return mu;
}

Eigen::Matrix3Xd dipole_jacobian(const MatterState& m) {
    const auto n = static_cast<Eigen::Index>(m.atom_count());
    Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, 3 * n);
    for (Eigen::Index a = 0; a < n; ++a)
        jac.block<3, 3>(0, 3 * a) = m.charge(static_cast<std::size_t>(a)) * Eigen::Matrix3d::Identity();
    return jac;
}

namespace {

struct Co2Frequencies {
    double asymmetric = 0.0, symmetric = 0.0, bend = 0.0;
};

// Assign fitted-model modes by displacement character: stretches move along
// the molecular (x) axis, the asymmetric one also moves carbon.
Co2Frequencies classify_co2_modes(const SystemModel& model) {
    const auto& m = model.matter;
    const auto hess = hessian_fd(model.force_field, m);
    const Eigen::VectorXd masses = m.masses();
    const auto modes = normal_modes(hess.hessian, std::span<const double>(masses.data(), masses.size()));
    Co2Frequencies out;
    double bend_sum = 0.0;
    int bend_count = 0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double f = modes.frequencies_cm1[static_cast<Eigen::Index>(k)];
        if (std::abs(f) < 5.0) continue;
        const Eigen::VectorXd e = modes.eigenvectors.col(static_cast<Eigen::Index>(k));
        double axial = 0.0;
        for (Eigen::Index a = 0; a < 3; ++a) axial += e[3 * a] * e[3 * a];
        if (axial > 0.5) {
            const double carbon = e.segment<3>(0).squaredNorm();
            if (carbon > 1e-6) out.asymmetric = f;
            else out.symmetric = f;
        } else {
            bend_sum += f;
            ++bend_count;
        }
    }
    if (bend_count != 2 || out.asymmetric == 0.0 || out.symmetric == 0.0)
        throw NumericalError("CO2 fit: unexpected normal-mode structure");
    out.bend = bend_sum / bend_count;
    return out;
}

}  // namespace

SystemModel build_co2_preset(const Co2Parameters& params) {
    const double m_c = units::amu_to_atomic(params.mass_carbon_amu);
    const double m_o = units::amu_to_atomic(params.mass_oxygen_amu);
    const double r = params.bond_length;

    std::vector<AtomicSpecies> species{{"C", m_c, params.charge_carbon},
                                       {"O", m_o, -0.5 * params.charge_carbon}};
    Eigen::Matrix3Xd pos = Eigen::Matrix3Xd::Zero(3, 3);
    pos(0, 1) = -r;
    pos(0, 2) = r;
    SystemModel model{MatterState(std::move(species), {0, 1, 1}, pos), {}};

    // Closed-form linear-triatomic relations give the starting point:
    //   w_sym^2  = (k + k12) / m_O
    //   w_asym^2 = (k - k12) (1 + 2 m_O / m_C) / m_O
    //   w_bend^2 = 2 k_b (1 + 2 m_O / m_C) / (r^2 m_O)
    const double g = 1.0 + 2.0 * m_o / m_c;
    const double w_as = units::wavenumber_to_hartree(params.asymmetric_stretch_cm1);
    const double w_s = units::wavenumber_to_hartree(params.symmetric_stretch_cm1);
    const double w_b = units::wavenumber_to_hartree(params.bend_cm1);
    double k_minus = w_as * w_as * m_o / g;
    double k_plus = w_s * w_s * m_o;
    double k_bend = w_b * w_b * r * r * m_o / (2.0 * g);

    auto assemble = [&] {
        auto& ff = model.force_field;
        const double k = 0.5 * (k_plus + k_minus);
        const double k12 = 0.5 * (k_plus - k_minus);
        ff.bonds = {{0, 1, r, k}, {0, 2, r, k}};
        ff.couplings = {{0, 1, k12}};
        ff.angles = {{1, 0, 2, std::numbers::pi, k_bend}};
    };

    assemble();
    for (int iter = 0; iter < 20; ++iter) {
        const auto f = classify_co2_modes(model);
        const double err = std::max({std::abs(f.asymmetric - params.asymmetric_stretch_cm1),
                                     std::abs(f.symmetric - params.symmetric_stretch_cm1),
                                     std::abs(f.bend - params.bend_cm1)});
        if (err < 1e-4) break;
        k_minus *= std::pow(params.asymmetric_stretch_cm1 / f.asymmetric, 2);
        k_plus *= std::pow(params.symmetric_stretch_cm1 / f.symmetric, 2);
        k_bend *= std::pow(params.bend_cm1 / f.bend, 2);
        assemble();
    }
    return model;
}

}  // namespace cavmd
