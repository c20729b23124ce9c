#include "cavmd/error.hpp"
#include "cavmd/initialization.hpp"
#include "cavmd/integrator.hpp"
#include "cavmd/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace cavmd;

TEST_CASE("atom resolution") {
    const auto m = build_co2_preset().matter;
    CHECK(resolve_atom(m, "C") == 0);
    CHECK(resolve_atom(m, "O1") == 1);
    CHECK(resolve_atom(m, "O2") == 2);
    CHECK_THROWS_AS(resolve_atom(m, "O"), InvalidInput);
    CHECK_THROWS_AS(resolve_atom(m, "N"), InvalidInput);
}

TEST_CASE("kick displacement") {
    const auto m = build_co2_preset().matter;
    const auto k = kick_displacement(m, "C", Vec3(0.01, 0.0, -0.02));
    CHECK(k.positions(0, 0) == doctest::Approx(units::angstrom_to_bohr(0.01)));
    CHECK(k.positions(2, 0) == doctest::Approx(units::angstrom_to_bohr(-0.02)));
    CHECK(k.positions.rightCols(2) == m.positions.rightCols(2));
    CHECK(kick_displacement(m, "O2", Vec3::Zero()).positions == m.positions);
    CHECK_THROWS_AS(kick_displacement(m, "X", Vec3::Zero()), InvalidInput);
}

TEST_CASE("x kick only moves the x dipole") {
    const auto co2 = build_co2_preset();
    SimulationState s;
    s.matter = kick_displacement(co2.matter, "C", Vec3(0.01, 0, 0));
    IntegrationPlan p;
    p.t_end_fs = 200;
    p.record_stride = 10;
    const auto traj = run_trajectory(s, co2.force_field, p);
    double yz = 0.0, x = 0.0;
    for (const auto& mu : traj.dipole) {
        yz = std::max(yz, std::abs(mu.y()) + std::abs(mu.z()));
        x = std::max(x, std::abs(mu.x()));
    }
    CHECK(yz == 0.0);
    CHECK(x > 1e-3);
}

TEST_CASE("maxwell-boltzmann sampling") {
    const auto m = build_co2_preset().matter;
    CHECK(sample_maxwell_boltzmann(m, 0.0, 1).velocities.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sample_maxwell_boltzmann(m, -1.0, 1), InvalidInput);

    const auto a = sample_maxwell_boltzmann(m, 100.0, 42);
    const auto b = sample_maxwell_boltzmann(m, 100.0, 42);
    const auto c = sample_maxwell_boltzmann(m, 100.0, 43);
    CHECK(a.velocities == b.velocities);
    CHECK(a.velocities != c.velocities);
    CHECK(a.positions == m.positions);

    const auto com = sample_maxwell_boltzmann(m, 100.0, 42, true);
    CHECK(com.linear_momentum().cwiseAbs().maxCoeff() < 1e-12);

    const int draws = 10000;
    const double kT = units::kBoltzmannHartreePerKelvin * 100.0;
    Eigen::MatrixXd v(draws, 9);
    for (int i = 0; i < draws; ++i) {
        const auto s = sample_maxwell_boltzmann(m, 100.0, 1000 + static_cast<std::uint64_t>(i));
        for (int a = 0; a < 3; ++a)
            for (int d = 0; d < 3; ++d) v(i, 3 * a + d) = s.velocities(d, a);
    }
    for (int col = 0; col < 9; ++col) {
        const double var = v.col(col).squaredNorm() / draws;
        const double expect = kT / m.mass(static_cast<std::size_t>(col / 3));
        // Sample variance of a normal has relative standard error sqrt(2 / n).
        CHECK(std::abs(var / expect - 1.0) < 4.0 * std::sqrt(2.0 / draws));
    }
    const Eigen::MatrixXd centered = v.rowwise() - v.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / draws;
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j) CHECK(std::abs(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j))) < 0.05);
}

TEST_CASE("photon initial state") {
    PhotonMode mode;
    mode.omega = 0.011;
    const auto p = init_photon(mode, 0.3, -0.1);
    CHECK(p.q == 0.3);
    CHECK(p.p == -0.1);
    CHECK(init_photon(mode).q == 0.0);
}

TEST_CASE("free photon oscillation keeps its amplitude") {
    const auto co2 = build_co2_preset();
    SimulationState s;
    s.matter = co2.matter;
    PhotonMode mode;
    mode.omega = units::wavenumber_to_hartree(2430.0);
    s.modes.push_back(init_photon(mode, 0.25, 0.0));
    IntegrationPlan p;
    p.t_end_fs = 100;
    const auto traj = run_trajectory(s, co2.force_field, p);
    double peak = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double amp = std::hypot(traj.photon_q[i][0], traj.photon_p[i][0] / mode.omega);
        CHECK(amp == doctest::Approx(0.25).epsilon(1e-12));
        peak = std::max(peak, std::abs(traj.photon_q[i][0]));
    }
    CHECK(peak == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("x kick with coupling builds up the photon coordinate") {
    const auto co2 = build_co2_preset();
    SimulationState s;
    s.matter = kick_displacement(co2.matter, "C", Vec3(0.01, 0, 0));
    PhotonMode mode;
    mode.omega = units::wavenumber_to_hartree(2430.0);
    mode.lambda = Vec3(0.05, 0, 0);
    s.modes.push_back(mode);
    IntegrationPlan p;
    p.t_end_fs = 300;
    const auto traj = run_trajectory(s, co2.force_field, p);
    double peak = 0.0;
    for (const auto& q : traj.photon_q) peak = std::max(peak, std::abs(q[0]));
    CHECK(peak > 1e-4);
}
