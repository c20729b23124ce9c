#pragma once

#include "cavmd/core_model.hpp"
#include "cavmd/units.hpp"

#include <cstdint>
#include <random>

namespace testsupport {

inline cavmd::MatterState perturbed(cavmd::MatterState m, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    for (Eigen::Index a = 0; a < m.positions.cols(); ++a)
        for (int d = 0; d < 3; ++d) m.positions(d, a) += u(rng);
    return m;
}

// Two atoms on the x axis joined by one harmonic bond.
struct Diatomic {
    cavmd::MatterState matter;
    cavmd::HarmonicForceField ff;
};

inline Diatomic diatomic(double k = 0.5, double r0 = 2.0, double m1_amu = 12.0, double m2_amu = 16.0,
                         double charge = 0.3) {
    using namespace cavmd;
    std::vector<AtomicSpecies> sp{{"A", units::amu_to_atomic(m1_amu), charge},
                                  {"B", units::amu_to_atomic(m2_amu), -charge}};
    Eigen::Matrix3Xd pos(3, 2);
    pos << -0.5 * r0, 0.5 * r0, 0, 0, 0, 0;
    Diatomic d{MatterState(sp, {0, 1}, pos), {}};
    d.ff.bonds.push_back({0, 1, r0, k});
    return d;
}

inline double hand_bond(const Eigen::Matrix3Xd& x, std::size_t i, std::size_t j) {
    return (x.col(static_cast<Eigen::Index>(i)) - x.col(static_cast<Eigen::Index>(j))).norm();
}

}  // namespace testsupport
