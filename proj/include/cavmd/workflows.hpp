#pragma once

#include "cavmd/analysis.hpp"
#include "cavmd/config.hpp"
#include "cavmd/integrator.hpp"
#include "cavmd/io.hpp"
#include "cavmd/normal_modes.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cavmd {

DriveSignal make_drive(const DriveConfig& cfg);

struct SimulationSetup {
    MatterState equilibrium;  // reference geometry, zero velocities
    HarmonicForceField force_field;
    SimulationState initial;  // after kick, thermal sampling and photon init
    IntegrationPlan plan;
};

SimulationSetup build_simulation(const RunConfig& cfg);

struct RunResult {
    Trajectory trajectory;
    Spectrum spectrum;
    std::vector<Peak> peaks;
    std::optional<double> rabi_splitting_cm1;
    std::string rabi_notice;  // why rabi_splitting_cm1 is empty
};

// Integrate and analyse a configuration without touching the filesystem.
RunResult simulate(const RunConfig& cfg);
RunResult analyse(const RunConfig& cfg, Trajectory traj);

struct RunOutputs {
    std::filesystem::path trajectory, spectrum, peaks, summary;
};

// Writes trajectory.dat, spectrum.dat, peaks.dat and summary.txt into `out_dir`.
RunOutputs write_run_outputs(const RunConfig& cfg, const RunResult& result, const std::filesystem::path& out_dir);
std::string run_summary(const RunConfig& cfg, const RunResult& result);

// Linearized polariton splitting for the configured cavity (Hessian about the
// preset/inline equilibrium geometry).
double oracle_splitting_for(const RunConfig& cfg);

// One row per lambda (all modes get that coupling magnitude). Runs are
// distributed over `threads` workers; unresolved splittings are flagged.
std::vector<ScanRow> scan_lambda(const RunConfig& base, std::span<const double> lambdas, unsigned threads = 1);

struct ModesResult {
    HessianResult hessian;
    NormalModeSet modes;
    PolaritonModel polaritons;
};

ModesResult compute_modes(const RunConfig& cfg);

// --out wins; otherwise a relative output.directory is placed under
// $CAVMD_OUTPUT_ROOT when that variable is set.
std::filesystem::path resolve_output_directory(const RunConfig& cfg, const std::optional<std::string>& cli_out);

}  // namespace cavmd
