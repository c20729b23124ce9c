#include "cavmd/workflows.hpp"

#include "cavmd/error.hpp"
#include "cavmd/initialization.hpp"
#include "cavmd/units.hpp"

#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

namespace cavmd {

DriveSignal make_drive(const DriveConfig& cfg) {
    if (cfg.kind == "sinusoid")
        return DriveSignal(SinusoidDrive{cfg.amplitude_au, units::wavenumber_to_hartree(cfg.frequency_cm1), cfg.phase_rad});
    if (cfg.kind == "impulse")
        return DriveSignal(ImpulseDrive{cfg.strength_au, units::fs_to_atomic(cfg.time_fs), units::fs_to_atomic(cfg.width_fs)});
    if (cfg.kind == "none") return {};
    throw ConfigError("unknown drive kind '" + cfg.kind + "'");
}

namespace {

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

SystemModel build_system(const SystemConfig& sys) {
    SystemModel model;
    if (sys.preset == "co2") {
        Co2Parameters params;
        if (sys.charge_carbon_e) params.charge_carbon = *sys.charge_carbon_e;
        model = build_co2_preset(params);
    } else if (sys.preset == "inline") {
        std::vector<AtomicSpecies> species;
        for (const auto& s : sys.species) species.push_back({s.label, units::amu_to_atomic(s.mass_amu), s.charge_e});
        std::vector<std::size_t> kind;
        Eigen::Matrix3Xd pos(3, static_cast<Eigen::Index>(sys.atoms.size()));
        for (std::size_t a = 0; a < sys.atoms.size(); ++a) {
            std::optional<std::size_t> k;
            for (std::size_t s = 0; s < species.size(); ++s)
                if (species[s].label == sys.atoms[a].species) k = s;
            if (!k) throw ConfigError("config /system/atoms/" + std::to_string(a) + ": unknown species '" +
                                      sys.atoms[a].species + "'");
            kind.push_back(*k);
            pos.col(static_cast<Eigen::Index>(a)) = to_vec(sys.atoms[a].position_bohr);
        }
        model.matter = MatterState(std::move(species), std::move(kind), pos);
        model.force_field = sys.force_field;
        model.force_field.validate(model.matter.atom_count());
    } else {
        throw ConfigError("unknown system preset '" + sys.preset + "'");
    }
    if (sys.dipole_origin_bohr) model.matter.dipole_origin = to_vec(*sys.dipole_origin_bohr);
    return model;
}

std::vector<PhotonMode> build_modes(const RunConfig& cfg) {
    std::vector<PhotonMode> modes;
    for (const auto& mc : cfg.cavity) {
        PhotonMode m;
        m.omega = units::wavenumber_to_hartree(mc.omega_cm1);
        m.lambda = mc.lambda_au * to_vec(mc.polarization).normalized();
        m.drive = make_drive(mc.drive);
        modes.push_back(init_photon(m, mc.q0_au, mc.p0_au));
    }
    return modes;
}

}  // namespace

SimulationSetup build_simulation(const RunConfig& cfg) {
    SimulationSetup setup;
    SystemModel model = build_system(cfg.system);
    setup.equilibrium = model.matter;
    setup.force_field = model.force_field;

    MatterState m = model.matter;
    const auto& init = cfg.initialization;
    if (init.kick) m = kick_displacement(m, init.kick->atom, to_vec(init.kick->delta_angstrom));
    m = sample_maxwell_boltzmann(m, init.temperature_k, init.seed, init.remove_com);
    setup.initial.matter = std::move(m);
    setup.initial.modes = build_modes(cfg);
    setup.initial.validate();

    auto& plan = setup.plan;
    plan.dt_fs = cfg.integration.dt_fs;
    plan.t_end_fs = cfg.integration.t_end_ps * 1000.0;
    plan.record_stride = cfg.integration.record_stride;
    plan.seed = init.seed;
    for (const auto& f : cfg.integration.force_drives)
        plan.force_drives.push_back({f.species, to_vec(f.direction), make_drive(f.drive)});
    plan.validate();
    return setup;
}

RunResult analyse(const RunConfig& cfg, Trajectory traj) {
    RunResult r;
    r.trajectory = std::move(traj);
    const auto& an = cfg.analysis;
    r.spectrum = ir_spectrum(r.trajectory, an.components, window_from_string(an.window), an.pad_factor);
    r.peaks = find_peaks(r.spectrum, an.min_prominence);
    if (r.trajectory.mode_count() == 0) {
        r.rabi_notice = "no cavity modes";
    } else {
        try {
            r.rabi_splitting_cm1 = rabi_splitting(r.spectrum, an.splitting_center_cm1, an.splitting_half_window_cm1,
                                                  an.min_prominence);
        } catch (const AnalysisError& e) {
            r.rabi_notice = e.what();
        }
    }
    return r;
}

RunResult simulate(const RunConfig& cfg) {
    const SimulationSetup setup = build_simulation(cfg);
    return analyse(cfg, run_trajectory(setup.initial, setup.force_field, setup.plan));
}

std::string run_summary(const RunConfig& cfg, const RunResult& result) {
    std::ostringstream os;
    os << std::setprecision(8);
    os << "# cavmd run summary\n";
    os << "# code_version: " << CAVMD_VERSION << "\n";
    os << "# seed: " << cfg.initialization.seed << "\n";
    os << "# config_hash: " << config_hash(cfg) << "\n";
    os << "name: " << cfg.name << "\n";
    os << "samples: " << result.trajectory.size() << "\n";
    os << "sample_interval_fs: " << units::atomic_to_fs(result.trajectory.sample_interval()) << "\n";
    os << "native_resolution_cm1: " << result.spectrum.native_resolution_cm1 << "\n";
    const auto& d = result.trajectory.drift;
    os << "energy_initial_Ha: " << d.initial_total << "\n";
    os << "energy_max_abs_deviation_Ha: " << d.max_abs_deviation << "\n";
    os << "energy_relative_deviation: " << d.relative_deviation << "\n";
    os << "peaks_cm1:";
    for (const auto& p : result.peaks) os << ' ' << p.wavenumber;
    os << "\n";
    if (result.rabi_splitting_cm1) os << "rabi_splitting_cm1: " << *result.rabi_splitting_cm1 << "\n";
    else os << "rabi_splitting_cm1: none (" << result.rabi_notice << ")\n";
    return os.str();
}

RunOutputs write_run_outputs(const RunConfig& cfg, const RunResult& result, const std::filesystem::path& out_dir) {
    const FileProvenance prov{CAVMD_VERSION, cfg.initialization.seed, config_hash(cfg)};
    RunOutputs out{out_dir / "trajectory.dat", out_dir / "spectrum.dat", out_dir / "peaks.dat", out_dir / "summary.txt"};
    write_trajectory(out.trajectory, result.trajectory, prov);
    write_spectrum(out.spectrum, result.spectrum, prov);
    write_peaks(out.peaks, result.peaks, prov);
    write_text_file(out.summary, run_summary(cfg, result));
    return out;
}

ModesResult compute_modes(const RunConfig& cfg) {
    const SystemModel model = build_system(cfg.system);
    ModesResult r;
    r.hessian = hessian_fd(model.force_field, model.matter);
    const Eigen::VectorXd masses = model.matter.masses();
    const Eigen::Matrix3Xd jac = dipole_jacobian(model.matter);
    r.modes = normal_modes(r.hessian.hessian, std::span<const double>(masses.data(), static_cast<std::size_t>(masses.size())), &jac);
    const auto modes = build_modes(cfg);
    r.polaritons = polariton_frequencies(r.hessian.hessian, model.matter, modes);
    return r;
}

double oracle_splitting_for(const RunConfig& cfg) { return oracle_rabi_splitting(compute_modes(cfg).polaritons); }

std::vector<ScanRow> scan_lambda(const RunConfig& base, std::span<const double> lambdas, unsigned threads) {
    if (base.cavity.empty()) throw ConfigError("scan-lambda needs at least one cavity mode in the base config");
    std::vector<ScanRow> rows(lambdas.size());
    std::vector<std::exception_ptr> errors(lambdas.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < lambdas.size(); i = next++) {
            try {
                RunConfig cfg = base;
                for (auto& m : cfg.cavity) m.lambda_au = lambdas[i];
                ScanRow row;
                row.lambda = lambdas[i];
                const RunResult res = simulate(cfg);
                row.dynamics_cm1 = res.rabi_splitting_cm1;
                try {
                    row.oracle_cm1 = oracle_splitting_for(cfg);
                } catch (const AnalysisError&) {
                }
                if (row.dynamics_cm1 && row.oracle_cm1) {
                    row.relative_deviation = std::abs(*row.dynamics_cm1 - *row.oracle_cm1) / *row.oracle_cm1;
                } else {
                    row.flag = "no_splitting";
                }
                rows[i] = row;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::filesystem::path resolve_output_directory(const RunConfig& cfg, const std::optional<std::string>& cli_out) {
    if (cli_out) return *cli_out;
    const std::filesystem::path dir(cfg.output_directory);
    if (dir.is_relative()) {
        if (const char* root = std::getenv("CAVMD_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / dir;
    }
    return dir;
}

}  // namespace cavmd
