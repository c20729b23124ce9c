#include "cavmd/config.hpp"

#include "cavmd/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cavmd {

using nlohmann::json;

namespace {

// Strict view of one JSON object: typed getters record which keys were read
// and finish() rejects everything else.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return require<T>(key);
    }

    template <typename T>
    T require(const std::string& key) {
        used_.insert(key);
        if (!has(key)) fail(path_ + "/" + key, "missing required key");
        return convert<T>(j_.at(key), path_ + "/" + key);
    }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::string child(const std::string& key) const { return path_ + "/" + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.count(key)) fail(path_ + "/" + key, "unknown key");
        }
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
    }

    template <typename T>
    static T convert(const json& v, const std::string& path) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) fail(path, "expected true or false");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) fail(path, "expected a string");
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
            return v.get<T>();
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) fail(path, "expected a number");
            const double d = v.get<double>();
            if (!std::isfinite(d)) fail(path, "expected a finite number");
            return d;
        } else if constexpr (std::is_same_v<T, std::array<double, 3>>) {
            if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
            std::array<double, 3> out{};
            for (std::size_t i = 0; i < 3; ++i) out[i] = convert<double>(v[i], path + "/" + std::to_string(i));
            return out;
        } else {
            static_assert(sizeof(T) == 0, "unsupported config type");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

void positive(double v, const std::string& path) {
    if (!(v > 0.0)) ObjectReader::fail(path, "must be > 0");
}

void non_negative(double v, const std::string& path) {
    if (!(v >= 0.0)) ObjectReader::fail(path, "must be >= 0");
}

DriveConfig parse_drive(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    DriveConfig d;
    d.kind = r.require<std::string>("kind");
    if (d.kind == "sinusoid") {
        d.amplitude_au = r.require<double>("amplitude_au");
        d.frequency_cm1 = r.require<double>("frequency_cm1");
        d.phase_rad = r.get<double>("phase_rad", 0.0);
        non_negative(d.frequency_cm1, r.child("frequency_cm1"));
    } else if (d.kind == "impulse") {
        d.strength_au = r.require<double>("strength_au");
        d.time_fs = r.require<double>("time_fs");
        d.width_fs = r.require<double>("width_fs");
        positive(d.width_fs, r.child("width_fs"));
    } else if (d.kind != "none") {
        ObjectReader::fail(r.child("kind"), "expected none, sinusoid or impulse");
    }
    r.finish();
    return d;
}

json drive_to_json(const DriveConfig& d) {
    json j{{"kind", d.kind}};
    if (d.kind == "sinusoid") {
        j["amplitude_au"] = d.amplitude_au;
        j["frequency_cm1"] = d.frequency_cm1;
        j["phase_rad"] = d.phase_rad;
    } else if (d.kind == "impulse") {
        j["strength_au"] = d.strength_au;
        j["time_fs"] = d.time_fs;
        j["width_fs"] = d.width_fs;
    }
    return j;
}

template <typename F>
void for_each_in_array(ObjectReader& r, const std::string& key, F&& f) {
    if (!r.has(key)) return;
    const json& arr = r.raw(key);
    if (!arr.is_array()) ObjectReader::fail(r.child(key), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) f(arr[i], r.child(key) + "/" + std::to_string(i));
}

SystemConfig parse_system(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    SystemConfig s;
    s.preset = r.get<std::string>("preset", "co2");
    if (r.has("dipole_origin_bohr")) s.dipole_origin_bohr = r.require<std::array<double, 3>>("dipole_origin_bohr");
    if (s.preset == "co2") {
        if (r.has("charge_carbon_e")) s.charge_carbon_e = r.require<double>("charge_carbon_e");
    } else if (s.preset == "inline") {
        for_each_in_array(r, "species", [&](const json& e, const std::string& p) {
            ObjectReader er(e, p);
            SpeciesConfig sc{er.require<std::string>("label"), er.require<double>("mass_amu"),
                             er.get<double>("charge_e", 0.0)};
            positive(sc.mass_amu, er.child("mass_amu"));
            er.finish();
            s.species.push_back(sc);
        });
        for_each_in_array(r, "atoms", [&](const json& e, const std::string& p) {
            ObjectReader er(e, p);
            s.atoms.push_back({er.require<std::string>("species"), er.require<std::array<double, 3>>("position_bohr")});
            er.finish();
        });
        for_each_in_array(r, "bonds", [&](const json& e, const std::string& p) {
            ObjectReader er(e, p);
            BondTerm b{er.require<std::size_t>("i"), er.require<std::size_t>("j"), er.require<double>("r0_bohr"),
                       er.require<double>("k_ha_per_bohr2")};
            non_negative(b.stiffness, er.child("k_ha_per_bohr2"));
            er.finish();
            s.force_field.bonds.push_back(b);
        });
        for_each_in_array(r, "angles", [&](const json& e, const std::string& p) {
            ObjectReader er(e, p);
            AngleTerm a{er.require<std::size_t>("i"), er.require<std::size_t>("j"), er.require<std::size_t>("k"),
                        er.require<double>("theta0_rad"), er.require<double>("k_ha_per_rad2")};
            non_negative(a.stiffness, er.child("k_ha_per_rad2"));
            er.finish();
            s.force_field.angles.push_back(a);
        });
        for_each_in_array(r, "bond_couplings", [&](const json& e, const std::string& p) {
            ObjectReader er(e, p);
            s.force_field.couplings.push_back({er.require<std::size_t>("bond_a"), er.require<std::size_t>("bond_b"),
                                               er.require<double>("k_ha_per_bohr2")});
            er.finish();
        });
        if (s.species.empty() || s.atoms.empty())
            ObjectReader::fail(path, "inline system needs at least one species and one atom");
    } else {
        ObjectReader::fail(r.child("preset"), "expected \"co2\" or \"inline\"");
    }
    r.finish();
    return s;
}

json system_to_json(const SystemConfig& s) {
    json j{{"preset", s.preset}};
    if (s.dipole_origin_bohr) j["dipole_origin_bohr"] = *s.dipole_origin_bohr;
    if (s.preset == "co2") {
        if (s.charge_carbon_e) j["charge_carbon_e"] = *s.charge_carbon_e;
        return j;
    }
    j["species"] = json::array();
    for (const auto& sp : s.species)
        j["species"].push_back({{"label", sp.label}, {"mass_amu", sp.mass_amu}, {"charge_e", sp.charge_e}});
    j["atoms"] = json::array();
    for (const auto& a : s.atoms) j["atoms"].push_back({{"species", a.species}, {"position_bohr", a.position_bohr}});
    j["bonds"] = json::array();
    for (const auto& b : s.force_field.bonds)
        j["bonds"].push_back({{"i", b.i}, {"j", b.j}, {"r0_bohr", b.r0}, {"k_ha_per_bohr2", b.stiffness}});
    j["angles"] = json::array();
    for (const auto& a : s.force_field.angles)
        j["angles"].push_back(
            {{"i", a.i}, {"j", a.j}, {"k", a.k}, {"theta0_rad", a.theta0}, {"k_ha_per_rad2", a.stiffness}});
    j["bond_couplings"] = json::array();
    for (const auto& c : s.force_field.couplings)
        j["bond_couplings"].push_back({{"bond_a", c.bond_a}, {"bond_b", c.bond_b}, {"k_ha_per_bohr2", c.stiffness}});
    return j;
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config syntax error at " + line_column(text, e.byte) + ": " + e.what());
    }

    RunConfig cfg;
    ObjectReader r(root, "");
    cfg.name = r.get<std::string>("name", "run");
    if (r.has("system")) cfg.system = parse_system(r.raw("system"), "/system");

    if (r.has("cavity")) {
        ObjectReader cr(r.raw("cavity"), "/cavity");
        for_each_in_array(cr, "modes", [&](const json& e, const std::string& p) {
            ObjectReader mr(e, p);
            CavityModeConfig m;
            m.omega_cm1 = mr.require<double>("omega_cm1");
            m.lambda_au = mr.require<double>("lambda_au");
            m.polarization = mr.get<std::array<double, 3>>("polarization", m.polarization);
            m.q0_au = mr.get<double>("q0_au", 0.0);
            m.p0_au = mr.get<double>("p0_au", 0.0);
            if (mr.has("drive")) m.drive = parse_drive(mr.raw("drive"), mr.child("drive"));
            positive(m.omega_cm1, mr.child("omega_cm1"));
            non_negative(m.lambda_au, mr.child("lambda_au"));
            const double norm = std::hypot(m.polarization[0], m.polarization[1], m.polarization[2]);
            if (!(norm > 0.0)) ObjectReader::fail(mr.child("polarization"), "must be a nonzero vector");
            mr.finish();
            cfg.cavity.push_back(m);
        });
        cr.finish();
    }

    if (r.has("initialization")) {
        ObjectReader ir(r.raw("initialization"), "/initialization");
        auto& init = cfg.initialization;
        if (ir.has("kick")) {
            ObjectReader kr(ir.raw("kick"), "/initialization/kick");
            KickConfig k;
            k.atom = kr.require<std::string>("atom");
            k.delta_angstrom = kr.require<std::array<double, 3>>("delta_angstrom");
            kr.finish();
            init.kick = k;
        }
        init.temperature_k = ir.get<double>("temperature_k", 0.0);
        init.seed = ir.get<std::uint64_t>("seed", 1);
        init.remove_com = ir.get<bool>("remove_com", false);
        non_negative(init.temperature_k, ir.child("temperature_k"));
        ir.finish();
    }

    if (r.has("integration")) {
        ObjectReader gr(r.raw("integration"), "/integration");
        auto& integ = cfg.integration;
        integ.dt_fs = gr.get<double>("dt_fs", integ.dt_fs);
        integ.t_end_ps = gr.get<double>("t_end_ps", integ.t_end_ps);
        integ.record_stride = gr.get<std::size_t>("record_stride", integ.record_stride);
        for_each_in_array(gr, "force_drives", [&](const json& e, const std::string& p) {
            ObjectReader fr(e, p);
            ForceDriveConfig f;
            f.species = fr.require<std::string>("species");
            f.direction = fr.get<std::array<double, 3>>("direction", f.direction);
            f.drive = parse_drive(fr.raw("drive"), fr.child("drive"));
            fr.finish();
            integ.force_drives.push_back(f);
        });
        positive(integ.dt_fs, gr.child("dt_fs"));
        if (!(integ.t_end_ps * 1000.0 >= integ.dt_fs)) ObjectReader::fail(gr.child("t_end_ps"), "must be >= dt_fs");
        if (integ.record_stride < 1) ObjectReader::fail(gr.child("record_stride"), "must be >= 1");
        gr.finish();
    }

    if (r.has("analysis")) {
        ObjectReader ar(r.raw("analysis"), "/analysis");
        auto& an = cfg.analysis;
        an.window = ar.get<std::string>("window", an.window);
        an.pad_factor = ar.get<std::size_t>("pad_factor", an.pad_factor);
        an.min_prominence = ar.get<double>("min_prominence", an.min_prominence);
        an.components = ar.get<std::string>("components", an.components);
        an.splitting_center_cm1 = ar.get<double>("splitting_center_cm1", an.splitting_center_cm1);
        an.splitting_half_window_cm1 = ar.get<double>("splitting_half_window_cm1", an.splitting_half_window_cm1);
        if (an.window != "hann" && an.window != "none") ObjectReader::fail(ar.child("window"), "expected hann or none");
        if (an.pad_factor < 1) ObjectReader::fail(ar.child("pad_factor"), "must be >= 1");
        if (an.components.empty() || an.components.find_first_not_of("xyz") != std::string::npos)
            ObjectReader::fail(ar.child("components"), "expected a non-empty subset of \"xyz\"");
        non_negative(an.min_prominence, ar.child("min_prominence"));
        positive(an.splitting_half_window_cm1, ar.child("splitting_half_window_cm1"));
        ar.finish();
    }

    if (r.has("output")) {
        ObjectReader orr(r.raw("output"), "/output");
        cfg.output_directory = orr.get<std::string>("directory", cfg.output_directory);
        orr.finish();
    }
    r.finish();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_run_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serialize_run_config(const RunConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["system"] = system_to_json(cfg.system);
    json modes = json::array();
    for (const auto& m : cfg.cavity) {
        json mj{{"omega_cm1", m.omega_cm1}, {"lambda_au", m.lambda_au}, {"polarization", m.polarization},
                {"q0_au", m.q0_au},         {"p0_au", m.p0_au}};
        if (m.drive.kind != "none") mj["drive"] = drive_to_json(m.drive);
        modes.push_back(mj);
    }
    j["cavity"] = {{"modes", modes}};
    const auto& init = cfg.initialization;
    j["initialization"] = {{"temperature_k", init.temperature_k}, {"seed", init.seed}, {"remove_com", init.remove_com}};
    if (init.kick)
        j["initialization"]["kick"] = {{"atom", init.kick->atom}, {"delta_angstrom", init.kick->delta_angstrom}};
    const auto& integ = cfg.integration;
    j["integration"] = {{"dt_fs", integ.dt_fs}, {"t_end_ps", integ.t_end_ps}, {"record_stride", integ.record_stride}};
    if (!integ.force_drives.empty()) {
        json drives = json::array();
        for (const auto& f : integ.force_drives)
            drives.push_back({{"species", f.species}, {"direction", f.direction}, {"drive", drive_to_json(f.drive)}});
        j["integration"]["force_drives"] = drives;
    }
    const auto& an = cfg.analysis;
    j["analysis"] = {{"window", an.window},
                     {"pad_factor", an.pad_factor},
                     {"min_prominence", an.min_prominence},
                     {"components", an.components},
                     {"splitting_center_cm1", an.splitting_center_cm1},
                     {"splitting_half_window_cm1", an.splitting_half_window_cm1}};
    j["output"] = {{"directory", cfg.output_directory}};
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : serialize_run_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cavmd
