#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cavmd {

using Vec3 = Eigen::Vector3d;

struct AtomicSpecies {
    std::string label;
    double mass = 0.0;    // electron masses
    double charge = 0.0;  // effective point charge, elementary charges (signed)

    bool operator==(const AtomicSpecies&) const = default;
};

// Nuclei as classical point particles. Column a of `positions` / `velocities`
// belongs to atom a, whose species is `species[kind[a]]`.
struct MatterState {
    std::vector<AtomicSpecies> species;
    std::vector<std::size_t> kind;
    Eigen::Matrix3Xd positions;   // bohr
    Eigen::Matrix3Xd velocities;  // bohr per atomic time unit
    // Reference point for the dipole of a charged system. A neutral system
    // ignores it.
    std::optional<Vec3> dipole_origin;

    MatterState() = default;
    MatterState(std::vector<AtomicSpecies> species, std::vector<std::size_t> kind,
                Eigen::Matrix3Xd positions);

    std::size_t atom_count() const { return kind.size(); }
    const AtomicSpecies& species_of(std::size_t atom) const { return species[kind[atom]]; }
    double mass(std::size_t atom) const { return species_of(atom).mass; }
    double charge(std::size_t atom) const { return species_of(atom).charge; }

    Eigen::VectorXd masses() const;
    Eigen::VectorXd charges() const;
    double total_charge() const;
    double total_mass() const;
    Vec3 center_of_mass() const;
    Vec3 linear_momentum() const;
    double kinetic_energy() const;

    // Display name "C", "O1", "O2": the species label, suffixed with a
    // 1-based counter when the species occurs more than once.
    std::string atom_name(std::size_t atom) const;
    std::optional<std::size_t> find_species(const std::string& label) const;

    // Throws InvalidInput when an invariant is broken (no atoms, non-finite
    // coordinates, non-positive mass, duplicate species labels, bad kind index).
    void validate() const;
};

struct BondTerm {
    std::size_t i = 0, j = 0;
    double r0 = 0.0;         // bohr
    double stiffness = 0.0;  // Ha/bohr^2

    bool operator==(const BondTerm&) const = default;
};

// Harmonic in the i-j-k angle with vertex j.
struct AngleTerm {
    std::size_t i = 0, j = 0, k = 0;
    double theta0 = 0.0;     // rad
    double stiffness = 0.0;  // Ha/rad^2

    bool operator==(const AngleTerm&) const = default;
};

// Cross term k * (r_a - r0_a) * (r_b - r0_b) between two bonds.
struct BondCoupling {
    std::size_t bond_a = 0, bond_b = 0;
    double stiffness = 0.0;  // Ha/bohr^2

    bool operator==(const BondCoupling&) const = default;
};

struct HarmonicForceField {
    std::vector<BondTerm> bonds;
    std::vector<AngleTerm> angles;
    std::vector<BondCoupling> couplings;

    bool operator==(const HarmonicForceField&) const = default;

    // Index and stiffness checks against a system with `atom_count` atoms.
    void validate(std::size_t atom_count) const;
};

double potential_energy(const HarmonicForceField& ff, const MatterState& m);

// Exact negative gradient of potential_energy, one column per atom (Ha/bohr).
Eigen::Matrix3Xd matter_forces(const HarmonicForceField& ff, const MatterState& m);

// mu = sum_a Q_a R_a (e*bohr). Charged systems need m.dipole_origin.
Vec3 dipole_moment(const MatterState& m);

// d mu / d R as a 3 x 3N matrix; block a is Q_a * I3.
Eigen::Matrix3Xd dipole_jacobian(const MatterState& m);

struct Co2Parameters {
    double bond_length = 2.192;      // bohr (1.16 A)
    double charge_carbon = 0.8;      // e; each oxygen carries -charge_carbon / 2
    double mass_carbon_amu = 12.011;
    double mass_oxygen_amu = 15.999;
    double asymmetric_stretch_cm1 = 2430.0;
    double bend_cm1 = 654.0;
    double symmetric_stretch_cm1 = 1330.0;
};

struct SystemModel {
    MatterState matter;
    HarmonicForceField force_field;
};

// Linear O=C=O along x, centered at the origin (atom order C, O1, O2), with
// bond, bond-bond and angle stiffnesses fitted against the normal-mode
// analysis so the target frequencies are reproduced.
SystemModel build_co2_preset(const Co2Parameters& params = {});

}  // namespace cavmd
