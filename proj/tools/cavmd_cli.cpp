#include "cavmd/error.hpp"
#include "cavmd/io.hpp"
#include "cavmd/workflows.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed_override;
};

cavmd::RunConfig load(const CommonOptions& o) {
    cavmd::RunConfig cfg = cavmd::load_run_config(o.config);
    if (o.seed_override) cfg.initialization.seed = *o.seed_override;
    return cfg;
}

cavmd::FileProvenance provenance(const cavmd::RunConfig& cfg) {
    return {CAVMD_VERSION, cfg.initialization.seed, cavmd::config_hash(cfg)};
}

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("-c,--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "output directory (default: config output.directory, under $CAVMD_OUTPUT_ROOT)");
    sub->add_option("--seed-override", o.seed_override, "replace initialization.seed");
}

int cmd_run(const CommonOptions& o) {
    const auto cfg = load(o);
    const auto dir = cavmd::resolve_output_directory(cfg, o.out);
    const auto result = cavmd::simulate(cfg);
    const auto files = cavmd::write_run_outputs(cfg, result, dir);
    std::cout << cavmd::run_summary(cfg, result);
    std::cout << "wrote " << files.trajectory.string() << ", " << files.spectrum.string() << ", "
              << files.peaks.string() << ", " << files.summary.string() << "\n";
    return 0;
}

int cmd_scan(const CommonOptions& o, const std::vector<double>& lambdas, unsigned threads) {
    const auto cfg = load(o);
    const auto dir = cavmd::resolve_output_directory(cfg, o.out);
    const auto rows = cavmd::scan_lambda(cfg, lambdas, threads);
    const auto path = dir / "scan_lambda.dat";
    cavmd::write_scan_table(path, rows, provenance(cfg));
    std::cout << "lambda_au  dynamics_cm1  oracle_cm1  rel_dev  flag\n";
    for (const auto& r : rows) {
        std::cout << r.lambda << "  " << (r.dynamics_cm1 ? std::to_string(*r.dynamics_cm1) : "nan") << "  "
                  << (r.oracle_cm1 ? std::to_string(*r.oracle_cm1) : "nan") << "  "
                  << (r.relative_deviation ? std::to_string(*r.relative_deviation) : "nan") << "  "
                  << (r.flag.empty() ? "-" : r.flag) << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_modes(const CommonOptions& o) {
    const auto cfg = load(o);
    const auto dir = cavmd::resolve_output_directory(cfg, o.out);
    const auto res = cavmd::compute_modes(cfg);
    const auto prov = provenance(cfg);
    cavmd::write_mode_report(dir / "modes.dat", res.modes, prov);
    cavmd::write_polariton_report(dir / "polaritons.dat", res.polaritons, prov);
    std::cout << "normal modes (cm^-1):";
    for (double f : res.modes.frequencies_cm1) std::cout << ' ' << f;
    std::cout << "\npolaritons (cm^-1):";
    for (double f : res.polaritons.frequencies_cm1) std::cout << ' ' << f;
    std::cout << "\nhessian symmetry defect: " << res.hessian.symmetry_defect << "\n";
    std::cout << "wrote " << (dir / "modes.dat").string() << ", " << (dir / "polaritons.dat").string() << "\n";
    return 0;
}

int cmd_spectrum(const CommonOptions& o, const std::string& traj_path) {
    const auto cfg = load(o);
    const auto dir = cavmd::resolve_output_directory(cfg, o.out);
    const auto result = cavmd::analyse(cfg, cavmd::read_trajectory(traj_path));
    const auto prov = provenance(cfg);
    cavmd::write_spectrum(dir / "spectrum.dat", result.spectrum, prov);
    cavmd::write_peaks(dir / "peaks.dat", result.peaks, prov);
    std::cout << "peaks (cm^-1):";
    for (const auto& p : result.peaks) std::cout << ' ' << p.wavenumber;
    std::cout << "\n";
    if (result.rabi_splitting_cm1) std::cout << "rabi splitting (cm^-1): " << *result.rabi_splitting_cm1 << "\n";
    else std::cout << "rabi splitting: none (" << result.rabi_notice << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field cavity molecular dynamics for CO2"};
    app.set_version_flag("--version", std::string(CAVMD_VERSION));
    app.require_subcommand(1);

    CommonOptions common;
    auto* run = app.add_subcommand("run", "integrate a configuration and write trajectory, spectrum, peaks, summary");
    add_common(run, common);

    std::vector<double> lambdas{0.02, 0.05, 0.1};
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* scan = app.add_subcommand("scan-lambda", "Rabi splitting from dynamics and oracle for several couplings");
    add_common(scan, common);
    scan->add_option("--lambdas", lambdas, "coupling magnitudes (a.u.)")->delimiter(',');
    scan->add_option("--threads", threads, "parallel runs")->check(CLI::PositiveNumber);

    auto* modes = app.add_subcommand("modes", "normal mode and polariton reports");
    add_common(modes, common);

    std::string traj_path;
    auto* spec = app.add_subcommand("spectrum", "re-analyse an existing trajectory file");
    add_common(spec, common);
    spec->add_option("-t,--trajectory", traj_path, "trajectory file written by 'run'")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(common);
        if (scan->parsed()) return cmd_scan(common, lambdas, threads);
        if (modes->parsed()) return cmd_modes(common);
        if (spec->parsed()) return cmd_spectrum(common, traj_path);
    } catch (const cavmd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cavmd::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
