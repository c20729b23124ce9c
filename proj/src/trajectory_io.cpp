#include "cavmd/error.hpp"
#include "cavmd/io.hpp"
#include "cavmd/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace cavmd {

namespace {

constexpr const char* kEnergyColumns[] = {"E_kin_matter_Ha", "E_ff_Ha", "E_photon_kin_Ha", "E_photon_pot_Ha",
                                          "E_total_Ha"};

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("trajectory file: cannot parse number '" + s + "' in " + context);
    }
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, const FileProvenance& prov) {
    const std::size_t n_atoms = traj.atom_count();
    const std::size_t n_modes = traj.mode_count();
    std::ostringstream os;
    os << std::setprecision(17);
    os << "# cavmd trajectory\n";
    os << "# code_version: " << prov.code_version << "\n";
    os << "# seed: " << prov.seed << "\n";
    os << "# config_hash: " << prov.config_hash << "\n";
    os << "# units: time=fs length=bohr photon_q_p=atomic dipole=e*bohr energy=Ha\n";
    os << "# dt_au: " << traj.dt << "\n";
    os << "# record_stride: " << traj.record_stride << "\n";
    os << "# species:";
    for (const auto& s : traj.species_labels) os << ' ' << s;
    os << "\n# atoms:";
    for (std::size_t a = 0; a < n_atoms; ++a) os << ' ' << traj.atom_names[a] << ':' << traj.atom_kind[a];
    os << "\n";
    for (std::size_t k = 0; k < n_modes; ++k) {
        const auto& m = traj.mode_parameters[k];
        os << "# mode " << k << ": omega_Ha=" << m.omega << " lambda_au=" << m.lambda.x() << ',' << m.lambda.y()
           << ',' << m.lambda.z() << "\n";
    }
    os << "# energy_drift: max_abs_Ha=" << traj.drift.max_abs_deviation
       << " relative=" << traj.drift.relative_deviation << "\n";
    os << "# columns: t_fs";
    for (std::size_t a = 0; a < n_atoms; ++a)
        for (const char* axis : {"x", "y", "z"}) os << ' ' << traj.atom_names[a] << '_' << axis << "_bohr";
    for (std::size_t k = 0; k < n_modes; ++k) os << " q" << k << "_au p" << k << "_au";
    os << " mu_x_e_bohr mu_y_e_bohr mu_z_e_bohr";
    for (const char* c : kEnergyColumns) os << ' ' << c;
    os << "\n";

    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << units::atomic_to_fs(traj.times[i]);
        for (std::size_t a = 0; a < n_atoms; ++a)
            for (int d = 0; d < 3; ++d) os << ' ' << traj.positions[i](d, static_cast<Eigen::Index>(a));
        for (std::size_t k = 0; k < n_modes; ++k)
            os << ' ' << traj.photon_q[i][static_cast<Eigen::Index>(k)] << ' '
               << traj.photon_p[i][static_cast<Eigen::Index>(k)];
        for (int d = 0; d < 3; ++d) os << ' ' << traj.dipole[i][d];
        const auto& e = traj.energy[i];
        os << ' ' << e.kinetic_matter << ' ' << e.potential_ff << ' ' << e.photon_kinetic << ' '
           << e.photon_potential << ' ' << e.total << "\n";
    }
    write_text_file(path, os.str());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file " + path.string());

    Trajectory traj;
    std::map<std::size_t, PhotonMode> modes;
    std::vector<std::string> columns;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 1);
            if (key == "seed") traj.seed = std::stoull(value);
            else if (key == "dt_au") traj.dt = to_double(split_ws(value).at(0), "dt_au");
            else if (key == "record_stride") traj.record_stride = std::stoull(value);
            else if (key == "species") traj.species_labels = split_ws(value);
            else if (key == "atoms") {
                for (const auto& tok : split_ws(value)) {
                    const auto parts = split_on(tok, ':');
                    if (parts.size() != 2) throw IoError("trajectory file: malformed atom entry '" + tok + "'");
                    traj.atom_names.push_back(parts[0]);
                    traj.atom_kind.push_back(std::stoull(parts[1]));
                }
            } else if (key.rfind("mode ", 0) == 0) {
                const std::size_t k = std::stoull(key.substr(5));
                PhotonMode m;
                for (const auto& tok : split_ws(value)) {
                    const auto eq = tok.find('=');
                    if (eq == std::string::npos) continue;
                    const std::string name = tok.substr(0, eq);
                    const std::string val = tok.substr(eq + 1);
                    if (name == "omega_Ha") m.omega = to_double(val, "mode header");
                    if (name == "lambda_au") {
                        const auto comps = split_on(val, ',');
                        if (comps.size() != 3) throw IoError("trajectory file: malformed lambda vector");
                        for (int d = 0; d < 3; ++d) m.lambda[d] = to_double(comps[static_cast<std::size_t>(d)], "lambda");
                    }
                }
                modes[k] = m;
            } else if (key == "columns") columns = split_ws(value);
            continue;
        }
        for (auto& [k, m] : modes) {
            if (k != traj.mode_parameters.size()) throw IoError("trajectory file: mode headers are not contiguous");
            traj.mode_parameters.push_back(m);
        }
        modes.clear();

        const std::size_t n_atoms = traj.atom_names.size();
        const std::size_t n_modes = traj.mode_parameters.size();
        const std::size_t expected = 1 + 3 * n_atoms + 2 * n_modes + 3 + 5;
        if (columns.size() != expected)
            throw IoError("trajectory file: column header does not match atoms/modes");
        const auto tok = split_ws(line);
        if (tok.size() != expected)
            throw IoError("trajectory file: line " + std::to_string(line_no) + " has " + std::to_string(tok.size()) +
                          " columns, expected " + std::to_string(expected));
        const std::string ctx = "line " + std::to_string(line_no);
        std::size_t c = 0;
        traj.times.push_back(units::fs_to_atomic(to_double(tok[c++], ctx)));
        Eigen::Matrix3Xd pos(3, static_cast<Eigen::Index>(n_atoms));
        for (std::size_t a = 0; a < n_atoms; ++a)
            for (int d = 0; d < 3; ++d) pos(d, static_cast<Eigen::Index>(a)) = to_double(tok[c++], ctx);
        Eigen::VectorXd q(static_cast<Eigen::Index>(n_modes)), p(static_cast<Eigen::Index>(n_modes));
        for (std::size_t k = 0; k < n_modes; ++k) {
            q[static_cast<Eigen::Index>(k)] = to_double(tok[c++], ctx);
            p[static_cast<Eigen::Index>(k)] = to_double(tok[c++], ctx);
        }
        Vec3 mu;
        for (int d = 0; d < 3; ++d) mu[d] = to_double(tok[c++], ctx);
        CavityEnergyBreakdown e;
        e.kinetic_matter = to_double(tok[c++], ctx);
        e.potential_ff = to_double(tok[c++], ctx);
        e.photon_kinetic = to_double(tok[c++], ctx);
        e.photon_potential = to_double(tok[c++], ctx);
        e.total = to_double(tok[c++], ctx);

        Eigen::Matrix3Xd sums = Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(traj.species_labels.size()));
        for (std::size_t a = 0; a < n_atoms; ++a) {
            if (traj.atom_kind[a] >= traj.species_labels.size())
                throw IoError("trajectory file: atom references unknown species");
            sums.col(static_cast<Eigen::Index>(traj.atom_kind[a])) += pos.col(static_cast<Eigen::Index>(a));
        }
        traj.positions.push_back(std::move(pos));
        traj.photon_q.push_back(std::move(q));
        traj.photon_p.push_back(std::move(p));
        traj.dipole.push_back(mu);
        traj.energy.push_back(e);
        traj.species_position_sum.push_back(std::move(sums));
    }
    if (traj.times.empty()) throw IoError("trajectory file " + path.string() + " contains no samples");

    const double e0 = traj.energy.front().total;
    for (const auto& e : traj.energy)
        traj.drift.max_abs_deviation = std::max(traj.drift.max_abs_deviation, std::abs(e.total - e0));
    traj.drift.initial_total = e0;
    traj.drift.relative_deviation = e0 != 0.0 ? traj.drift.max_abs_deviation / std::abs(e0) : 0.0;
    traj.drift.final_deviation = traj.energy.back().total - e0;
    return traj;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace cavmd
