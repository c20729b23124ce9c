#include "cavmd/io.hpp"

#include <iomanip>
#include <sstream>

namespace cavmd {

namespace {

void provenance_header(std::ostream& os, const char* kind, const FileProvenance& prov) {
    os << "# cavmd " << kind << "\n";
    os << "# code_version: " << prov.code_version << "\n";
    os << "# seed: " << prov.seed << "\n";
    os << "# config_hash: " << prov.config_hash << "\n";
}

}  // namespace

void write_spectrum(const std::filesystem::path& path, const Spectrum& s, const FileProvenance& prov) {
    std::ostringstream os;
    provenance_header(os, "spectrum", prov);
    os << std::setprecision(10);
    os << "# units: wavenumber=cm^-1 intensity=normalized(max=1)\n";
    os << "# window: " << to_string(s.window) << "\n";
    os << "# pad_factor: " << s.pad_factor << "\n";
    os << "# trace_length: " << s.trace_length << "\n";
    os << "# native_resolution_cm1: " << s.native_resolution_cm1 << "\n";
    os << "# components: " << s.components << "\n";
    os << "# columns: wavenumber_cm1 intensity\n";
    const double top = s.max_intensity();
    const double scale = top > 0.0 ? 1.0 / top : 0.0;
    for (std::size_t k = 0; k < s.wavenumbers.size(); ++k)
        os << s.wavenumbers[k] << ' ' << s.intensity[k] * scale << "\n";
    write_text_file(path, os.str());
}

void write_peaks(const std::filesystem::path& path, std::span<const Peak> peaks, const FileProvenance& prov) {
    std::ostringstream os;
    provenance_header(os, "peaks", prov);
    os << std::setprecision(10);
    os << "# units: wavenumber=cm^-1 height,prominence=fraction of spectrum maximum\n";
    os << "# columns: wavenumber_cm1 height prominence\n";
    for (const auto& p : peaks) os << p.wavenumber << ' ' << p.height << ' ' << p.prominence << "\n";
    write_text_file(path, os.str());
}

void write_mode_report(const std::filesystem::path& path, const NormalModeSet& modes, const FileProvenance& prov) {
    std::ostringstream os;
    provenance_header(os, "normal modes", prov);
    os << std::setprecision(10);
    os << "# units: frequency=cm^-1 (imaginary as negative) ir_intensity=e^2/m_e eigenvector=mass-weighted\n";
    os << "# columns: index frequency_cm1 ir_intensity eigenvector[3N]\n";
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        os << k << ' ' << modes.frequencies_cm1[i] << ' ' << modes.ir_intensity[i];
        for (Eigen::Index r = 0; r < modes.eigenvectors.rows(); ++r) os << ' ' << modes.eigenvectors(r, i);
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_polariton_report(const std::filesystem::path& path, const PolaritonModel& model,
                            const FileProvenance& prov) {
    std::ostringstream os;
    provenance_header(os, "polaritons", prov);
    os << std::setprecision(10);
    os << "# units: frequency=cm^-1 weights=fraction eigenvector=mass-weighted matter then photon\n";
    os << "# matter_dim: " << model.matter_dim << "\n";
    os << "# columns: index frequency_cm1 matter_weight photon_weight eigenvector\n";
    for (Eigen::Index k = 0; k < model.frequencies_cm1.size(); ++k) {
        os << k << ' ' << model.frequencies_cm1[k] << ' ' << model.matter_weight[k] << ' '
           << model.photon_weight[k];
        for (Eigen::Index r = 0; r < model.eigenvectors.rows(); ++r) os << ' ' << model.eigenvectors(r, k);
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_scan_table(const std::filesystem::path& path, std::span<const ScanRow> rows, const FileProvenance& prov) {
    std::ostringstream os;
    provenance_header(os, "lambda scan", prov);
    os << std::setprecision(10);
    os << "# units: lambda=atomic splitting=cm^-1 deviation=relative\n";
    os << "# columns: lambda_au rabi_dynamics_cm1 rabi_oracle_cm1 relative_deviation flag\n";
    auto opt = [](const std::optional<double>& v) {
        std::ostringstream s;
        s << std::setprecision(10);
        if (v) s << *v;
        else s << "nan";
        return s.str();
    };
    for (const auto& r : rows) {
        os << r.lambda << ' ' << opt(r.dynamics_cm1) << ' ' << opt(r.oracle_cm1) << ' ' << opt(r.relative_deviation)
           << ' ' << (r.flag.empty() ? "ok" : r.flag) << "\n";
    }
    write_text_file(path, os.str());
}

}  // namespace cavmd
