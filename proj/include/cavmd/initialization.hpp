#pragma once

#include "cavmd/cavity.hpp"
#include "cavmd/core_model.hpp"

#include <cstdint>
#include <string>

namespace cavmd {

// Index of the atom named `atom_label`: either its display name ("C", "O2")
// or a species label that occurs exactly once. Throws InvalidInput otherwise.
std::size_t resolve_atom(const MatterState& m, const std::string& atom_label);

// Shift one atom by `delta_angstrom`; velocities are untouched.
MatterState kick_displacement(const MatterState& m, const std::string& atom_label, const Vec3& delta_angstrom);

// Independent normal velocity components with variance k_B T / M_a. Each atom
// draws from its own stream derived from (seed, atom index). With
// `remove_com` the total linear momentum is subtracted; angular momentum is
// always kept, so a thermalized molecule keeps spinning.
MatterState sample_maxwell_boltzmann(const MatterState& m, double temperature_k, std::uint64_t seed,
                                     bool remove_com = false);

PhotonMode init_photon(PhotonMode mode, double q0 = 0.0, double p0 = 0.0);

}  // namespace cavmd
