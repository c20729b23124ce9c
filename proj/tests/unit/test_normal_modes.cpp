#include "cavmd/error.hpp"
#include "cavmd/normal_modes.hpp"
#include "cavmd/units.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

using namespace cavmd;

namespace {

std::vector<double> mass_list(const MatterState& m) {
    std::vector<double> out;
    for (std::size_t a = 0; a < m.atom_count(); ++a) out.push_back(m.mass(a));
    return out;
}

NormalModeSet co2_modes(const SystemModel& co2) {
    const auto h = hessian_fd(co2.force_field, co2.matter);
    const auto masses = mass_list(co2.matter);
    const Eigen::Matrix3Xd jac = dipole_jacobian(co2.matter);
    return normal_modes(h.hessian, masses, &jac);
}

PhotonMode cavity(double lambda, Vec3 pol = Vec3::UnitX(), double cm1 = 2430.0) {
    PhotonMode m;
    m.omega = units::wavenumber_to_hartree(cm1);
    m.lambda = lambda * pol.normalized();
    return m;
}

std::vector<double> sorted_abs_above(const Eigen::VectorXd& f, double cut) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > cut) out.push_back(f[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("co2 normal modes") {
    const auto co2 = build_co2_preset();
    const auto h = hessian_fd(co2.force_field, co2.matter);
    CHECK(h.symmetry_defect < 1e-8);
    CHECK(h.richardson_defect < 1e-5);
    const auto nm = co2_modes(co2);
    REQUIRE(nm.size() == 9);
    int near_zero = 0;
    for (Eigen::Index i = 0; i < 9; ++i) near_zero += std::abs(nm.frequencies_cm1[i]) < 5.0;
    CHECK(near_zero == 5);
    const auto f = sorted_abs_above(nm.frequencies_cm1, 5.0);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == doctest::Approx(654.0).epsilon(1.0 / 654.0));
    CHECK(f[1] == doctest::Approx(654.0).epsilon(1.0 / 654.0));
    CHECK(f[2] == doctest::Approx(1330.0).epsilon(1.0 / 1330.0));
    CHECK(f[3] == doctest::Approx(2430.0).epsilon(1.0 / 2430.0));

    const Eigen::MatrixXd gram = nm.eigenvectors.transpose() * nm.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);

    // IR activity: stretch 2430 and both bends active, symmetric stretch dark
    const Eigen::Index asym = 8, sym = 7;
    CHECK(nm.ir_intensity[asym] > 1e-6);
    CHECK(nm.ir_intensity[5] > 1e-6);
    CHECK(nm.ir_intensity[6] > 1e-6);
    CHECK(nm.ir_intensity[sym] < 1e-12 * nm.ir_intensity[asym]);

    const auto masses = mass_list(co2.matter);
    const Eigen::Matrix3Xd d = nm.cartesian_displacement(asym, masses);
    CHECK(d(0, 0) * d(0, 1) < 0.0);
    CHECK(d(0, 0) * d(0, 2) < 0.0);
    CHECK(d(0, 1) == doctest::Approx(d(0, 2)).epsilon(1e-8));
    const Eigen::Matrix3Xd s = nm.cartesian_displacement(sym, masses);
    CHECK(std::abs(s(0, 0)) < 1e-8 * std::abs(s(0, 1)));
    CHECK(s(0, 1) == doctest::Approx(-s(0, 2)).epsilon(1e-8));
}

TEST_CASE("diatomic hessian matches the analytic bond matrix") {
    auto d = testsupport::diatomic(0.37, 2.1);
    d.matter.positions = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix() * d.matter.positions;
    const auto h = hessian_fd(d.ff, d.matter);
    const Vec3 u = (d.matter.positions.col(1) - d.matter.positions.col(0)).normalized();
    Eigen::MatrixXd expect(6, 6);
    const Eigen::Matrix3d b = 0.37 * u * u.transpose();
    expect << b, -b, -b, b;
    CHECK((h.hessian - expect).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("identity hessian with unit masses") {
    const std::vector<double> masses(3, 1.0);
    const auto nm = normal_modes(Eigen::MatrixXd::Identity(9, 9), masses);
    for (Eigen::Index i = 0; i < 9; ++i)
        CHECK(nm.frequencies_cm1[i] == doctest::Approx(units::hartree_to_wavenumber(1.0)));
}

TEST_CASE("negative curvature is reported as a negative frequency") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
    h(0, 0) = -4.0;
    const std::vector<double> masses{1.0};
    const auto nm = normal_modes(h, masses);
    CHECK(nm.frequencies_cm1[0] == doctest::Approx(-2.0 * units::hartree_to_wavenumber(1.0)));
}

TEST_CASE("frequencies are invariant under rigid rotation") {
    const auto co2 = build_co2_preset();
    const auto ref = co2_modes(co2);
    auto rotated = co2;
    rotated.matter.positions = Eigen::AngleAxisd(1.1, Vec3(0.3, -0.5, 0.8).normalized()).toRotationMatrix() *
                               co2.matter.positions;
    rotated.matter.positions.colwise() += Vec3(1.0, 2.0, -3.0);
    const auto rot = co2_modes(rotated);
    const auto a = sorted_abs_above(ref.frequencies_cm1, 5.0);
    const auto b = sorted_abs_above(rot.frequencies_cm1, 5.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-7));
}

TEST_CASE("hessian refuses a geometry away from the minimum") {
    const auto co2 = build_co2_preset();
    auto m = co2.matter;
    m.positions(0, 0) += 0.01;
    CHECK_THROWS_AS(hessian_fd(co2.force_field, m), NumericalError);
}

TEST_CASE("rigid body basis") {
    const auto co2 = build_co2_preset();
    CHECK(rigid_body_basis(co2.matter).cols() == 5);
    auto bent = co2.matter;
    bent.positions(1, 1) = 0.5;
    const Eigen::MatrixXd b = rigid_body_basis(bent);
    CHECK(b.cols() == 6);
    CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("uncoupled polariton model is block diagonal") {
    const auto co2 = build_co2_preset();
    const auto h = hessian_fd(co2.force_field, co2.matter);
    std::vector<PhotonMode> modes{cavity(0.0, Vec3::UnitX(), 2000.0)};
    const auto pm = polariton_frequencies(h.hessian, co2.matter, modes);
    const auto f = sorted_abs_above(pm.frequencies_cm1, 5.0);
    const auto nm = sorted_abs_above(co2_modes(co2).frequencies_cm1, 5.0);
    REQUIRE(f.size() == 5);
    CHECK(f[0] == doctest::Approx(nm[0]).epsilon(1e-10));
    CHECK(f[1] == doctest::Approx(nm[1]).epsilon(1e-10));
    CHECK(f[2] == doctest::Approx(nm[2]).epsilon(1e-10));
    CHECK(f[3] == doctest::Approx(2000.0).epsilon(1e-12));
    CHECK(f[4] == doctest::Approx(nm[3]).epsilon(1e-10));
    CHECK((pm.matrix - pm.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(oracle_rabi_splitting(pm), AnalysisError);

    modes[0].omega = 0.0;
    CHECK_THROWS_AS(polariton_frequencies(h.hessian, co2.matter, modes), InvalidInput);
}

TEST_CASE("two-oscillator toy matches the closed-form 2x2 eigenvalues") {
    auto d = testsupport::diatomic(0.45, 2.0, 12.0, 16.0, 0.35);
    const auto h = hessian_fd(d.ff, d.matter);
    const double m1 = d.matter.mass(0), m2 = d.matter.mass(1);
    const double w1 = std::sqrt(0.45 * (m1 + m2) / (m1 * m2));
    // unit mass-weighted stretch vector along x and its dipole derivative
    const double n = std::sqrt(1.0 / m1 + 1.0 / m2);
    const double dmu = (-0.35 / m1 - 0.35 / m2) / n;
    for (double lam : {0.01, 0.05, 0.2}) {
        const auto mode = cavity(lam, Vec3::UnitX(), 1500.0);
        const double w2 = mode.omega;
        const double g = w2 * lam * dmu;
        std::vector<PhotonMode> modes{mode};
        for (bool dse : {false, true}) {
            const double a = w1 * w1 + (dse ? lam * lam * dmu * dmu : 0.0);
            const double disc = std::sqrt((a - w2 * w2) * (a - w2 * w2) + 4 * g * g);
            const double lo = std::sqrt((a + w2 * w2 - disc) / 2), hi = std::sqrt((a + w2 * w2 + disc) / 2);
            const auto pm = polariton_frequencies(h.hessian, d.matter, modes, dse);
            const auto f = sorted_abs_above(pm.frequencies_cm1, 5.0);
            REQUIRE(f.size() == 2);
            CHECK(f[0] == doctest::Approx(units::hartree_to_wavenumber(lo)).epsilon(1e-7));
            CHECK(f[1] == doctest::Approx(units::hartree_to_wavenumber(hi)).epsilon(1e-7));
        }
    }
}

TEST_CASE("resonant co2 polaritons") {
    const auto co2 = build_co2_preset();
    const auto h = hessian_fd(co2.force_field, co2.matter);
    const auto nm = sorted_abs_above(co2_modes(co2).frequencies_cm1, 5.0);
    double previous = 0.0;
    for (double lam : {0.02, 0.05, 0.1}) {
        CAPTURE(lam);
        std::vector<PhotonMode> modes{cavity(lam)};
        const auto pm = polariton_frequencies(h.hessian, co2.matter, modes);
        const double gap = oracle_rabi_splitting(pm);
        CHECK(gap > previous);
        previous = gap;

        // dark bends and symmetric stretch are untouched
        const auto f = sorted_abs_above(pm.frequencies_cm1, 5.0);
        REQUIRE(f.size() == 5);
        CHECK(std::abs(f[0] - nm[0]) < 0.1);
        CHECK(std::abs(f[1] - nm[1]) < 0.1);
        CHECK(std::abs(f[2] - nm[2]) < 0.1);
        CHECK(f[3] < 2430.0);
        CHECK(f[4] > 2430.0);
        CHECK(f[4] - f[3] == doctest::Approx(gap).epsilon(1e-12));

        // both polaritons are near-even mixtures
        for (Eigen::Index i = 0; i < pm.photon_weight.size(); ++i) {
            if (std::abs(pm.frequencies_cm1[i]) < 2000.0) continue;
            CHECK(pm.photon_weight[i] == doctest::Approx(0.5).epsilon(0.15));
            CHECK(pm.matter_weight[i] + pm.photon_weight[i] == doctest::Approx(1.0));
        }

        // trace identity: sum of squared frequencies = uncoupled + self-energy
        const Eigen::VectorXd inv_sqrt = co2.matter.masses().cwiseInverse().cwiseSqrt().replicate(1, 3).transpose().reshaped();
        const Eigen::MatrixXd hmw = inv_sqrt.asDiagonal() * h.hessian * inv_sqrt.asDiagonal();
        const Eigen::MatrixXd b = rigid_body_basis(co2.matter);
        const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(9, 9) - b * b.transpose();
        const double uncoupled = (p * hmw * p).trace() + modes[0].omega * modes[0].omega;
        const Eigen::VectorXd grad = p * (inv_sqrt.asDiagonal() * (dipole_jacobian(co2.matter).transpose() * modes[0].lambda));
        const double self_energy = grad.squaredNorm();
        CHECK(pm.eigenvalues.sum() == doctest::Approx(uncoupled + self_energy).epsilon(1e-8));
        CHECK(pm.self_energy_trace == doctest::Approx(self_energy).epsilon(1e-12));

        // dropping the self-energy curvature moves the polariton centroid down
        const auto no_dse = polariton_frequencies(h.hessian, co2.matter, modes, false);
        const auto g = sorted_abs_above(no_dse.frequencies_cm1, 5.0);
        CHECK(g[3] + g[4] < f[3] + f[4]);
    }
}
