#pragma once

// Atomic units (hbar = e = m_e = 1) are used everywhere inside the library.
// Conversions below are the only place where lab units appear.

#include <numbers>

namespace cavmd::units {

inline constexpr double kHartreeToWavenumber = 219474.6314;  // cm^-1 per Ha
inline constexpr double kBohrToAngstrom = 0.529177;
inline constexpr double kAtomicTimeToFs = 0.0241888;
inline constexpr double kAmuToElectronMass = 1822.888486;
inline constexpr double kBoltzmannHartreePerKelvin = 3.166811563e-6;

inline constexpr double kAngstromToBohr = 1.0 / kBohrToAngstrom;
inline constexpr double kFsToAtomicTime = 1.0 / kAtomicTimeToFs;

constexpr double wavenumber_to_hartree(double cm1) { return cm1 / kHartreeToWavenumber; }
constexpr double hartree_to_wavenumber(double ha) { return ha * kHartreeToWavenumber; }
constexpr double angstrom_to_bohr(double a) { return a * kAngstromToBohr; }
constexpr double bohr_to_angstrom(double b) { return b * kBohrToAngstrom; }
constexpr double fs_to_atomic(double fs) { return fs * kFsToAtomicTime; }
constexpr double atomic_to_fs(double t) { return t * kAtomicTimeToFs; }
constexpr double amu_to_atomic(double amu) { return amu * kAmuToElectronMass; }

}  // namespace cavmd::units
