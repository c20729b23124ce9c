#pragma once

#include "cavmd/analysis.hpp"
#include "cavmd/integrator.hpp"
#include "cavmd/normal_modes.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cavmd {

// Written into the '#' header of every output file. No timestamps, so equal
// inputs produce byte-identical files.
struct FileProvenance {
    std::string code_version = CAVMD_VERSION;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Column text format:
//   t_fs, <atom>_{x,y,z}_bohr..., q<k>_au, p<k>_au..., mu_{x,y,z}_e_bohr,
//   E_kin_matter_Ha, E_ff_Ha, E_photon_kin_Ha, E_photon_pot_Ha, E_total_Ha
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, const FileProvenance& prov);

// Restores everything written by write_trajectory; velocities stay empty and
// mode drives are not restored.
Trajectory read_trajectory(const std::filesystem::path& path);

// Two columns: wavenumber (cm^-1) and intensity normalized to max = 1.
void write_spectrum(const std::filesystem::path& path, const Spectrum& s, const FileProvenance& prov);
void write_peaks(const std::filesystem::path& path, std::span<const Peak> peaks, const FileProvenance& prov);

// One line per mode: frequency, IR proxy, mass-weighted eigenvector.
void write_mode_report(const std::filesystem::path& path, const NormalModeSet& modes, const FileProvenance& prov);
// One line per eigenvector: frequency, matter weight, photon weight, eigenvector.
void write_polariton_report(const std::filesystem::path& path, const PolaritonModel& model,
                            const FileProvenance& prov);

struct ScanRow {
    double lambda = 0.0;
    std::optional<double> dynamics_cm1;
    std::optional<double> oracle_cm1;
    std::optional<double> relative_deviation;
    std::string flag;  // empty when both estimates exist
};

void write_scan_table(const std::filesystem::path& path, std::span<const ScanRow> rows, const FileProvenance& prov);

// Throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cavmd
