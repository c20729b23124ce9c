#pragma once

#include "cavmd/analysis.hpp"
#include "cavmd/core_model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cavmd {

// Run configuration. Stored as JSON; every dimensioned key carries its unit
// as a suffix (omega_cm1, dt_fs, lambda_au, ...). See docs/config.md.

struct DriveConfig {
    std::string kind = "none";  // none | sinusoid | impulse
    double amplitude_au = 0.0;
    double frequency_cm1 = 0.0;
    double phase_rad = 0.0;
    double strength_au = 0.0;
    double time_fs = 0.0;
    double width_fs = 1.0;

    bool operator==(const DriveConfig&) const = default;
};

struct SpeciesConfig {
    std::string label;
    double mass_amu = 0.0;
    double charge_e = 0.0;

    bool operator==(const SpeciesConfig&) const = default;
};

struct AtomConfig {
    std::string species;
    std::array<double, 3> position_bohr{};

    bool operator==(const AtomConfig&) const = default;
};

struct SystemConfig {
    std::string preset = "co2";  // "co2" or "inline"
    std::optional<double> charge_carbon_e;  // co2 preset override
    std::vector<SpeciesConfig> species;     // inline only
    std::vector<AtomConfig> atoms;          // inline only
    HarmonicForceField force_field;         // inline only
    std::optional<std::array<double, 3>> dipole_origin_bohr;

    bool operator==(const SystemConfig&) const = default;
};

struct CavityModeConfig {
    double omega_cm1 = 2430.0;
    double lambda_au = 0.0;
    std::array<double, 3> polarization{1.0, 0.0, 0.0};
    double q0_au = 0.0;
    double p0_au = 0.0;
    DriveConfig drive;

    bool operator==(const CavityModeConfig&) const = default;
};

struct KickConfig {
    std::string atom = "C";
    std::array<double, 3> delta_angstrom{0.01, 0.01, 0.01};

    bool operator==(const KickConfig&) const = default;
};

struct InitializationConfig {
    std::optional<KickConfig> kick;
    double temperature_k = 0.0;
    std::uint64_t seed = 1;
    bool remove_com = false;

    bool operator==(const InitializationConfig&) const = default;
};

struct ForceDriveConfig {
    std::string species;
    std::array<double, 3> direction{1.0, 0.0, 0.0};
    DriveConfig drive;

    bool operator==(const ForceDriveConfig&) const = default;
};

struct IntegrationConfig {
    double dt_fs = 0.1;
    double t_end_ps = 5.0;
    std::size_t record_stride = 10;
    std::vector<ForceDriveConfig> force_drives;

    bool operator==(const IntegrationConfig&) const = default;
};

struct AnalysisConfig {
    std::string window = "hann";
    std::size_t pad_factor = 4;
    double min_prominence = 0.01;
    std::string components = "xyz";
    double splitting_center_cm1 = 2430.0;
    double splitting_half_window_cm1 = 300.0;

    bool operator==(const AnalysisConfig&) const = default;
};

struct RunConfig {
    std::string name = "run";
    SystemConfig system;
    std::vector<CavityModeConfig> cavity;
    InitializationConfig initialization;
    IntegrationConfig integration;
    AnalysisConfig analysis;
    std::string output_directory = "out";

    bool operator==(const RunConfig&) const = default;
};

// Parse and validate. Throws ConfigError naming the line (syntax errors) or
// the JSON path of the offending key (schema errors, unknown keys).
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical JSON text (sorted keys, 2-space indent).
std::string serialize_run_config(const RunConfig& cfg);

// 16 hex digits of FNV-1a over the canonical serialization.
std::string config_hash(const RunConfig& cfg);

}  // namespace cavmd
