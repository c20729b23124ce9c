#include "cavmd/initialization.hpp"

#include "cavmd/error.hpp"
#include "cavmd/units.hpp"

#include <cmath>
#include <random>

namespace cavmd {

std::size_t resolve_atom(const MatterState& m, const std::string& atom_label) {
    for (std::size_t a = 0; a < m.atom_count(); ++a)
        if (m.atom_name(a) == atom_label) return a;
    std::optional<std::size_t> hit;
    for (std::size_t a = 0; a < m.atom_count(); ++a) {
        if (m.species_of(a).label != atom_label) continue;
        if (hit) throw InvalidInput("atom label '" + atom_label + "' is ambiguous; use a numbered name such as '" +
                                    m.atom_name(*hit) + "'");
        hit = a;
    }
    if (!hit) throw InvalidInput("unknown atom label '" + atom_label + "'");
    return *hit;
}

MatterState kick_displacement(const MatterState& m, const std::string& atom_label, const Vec3& delta_angstrom) {
    const std::size_t a = resolve_atom(m, atom_label);
    MatterState out = m;
    out.positions.col(static_cast<Eigen::Index>(a)) += delta_angstrom * units::kAngstromToBohr;
    return out;
}

MatterState sample_maxwell_boltzmann(const MatterState& m, double temperature_k, std::uint64_t seed,
                                     bool remove_com) {
    if (!(temperature_k >= 0.0)) throw InvalidInput("temperature must be >= 0 K");
    MatterState out = m;
    const double kt = units::kBoltzmannHartreePerKelvin * temperature_k;
    for (std::size_t a = 0; a < m.atom_count(); ++a) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(a)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double sigma = std::sqrt(kt / m.mass(a));
        for (int d = 0; d < 3; ++d) out.velocities(d, static_cast<Eigen::Index>(a)) = sigma * normal(rng);
    }
    if (remove_com) {
        const Vec3 v_com = out.linear_momentum() / out.total_mass();
        out.velocities.colwise() -= v_com;
    }
    return out;
}

PhotonMode init_photon(PhotonMode mode, double q0, double p0) {
    mode.q = q0;
    mode.p = p0;
    return mode;
}

}  // namespace cavmd
