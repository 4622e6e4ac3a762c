#include "srsa/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

namespace fs = std::filesystem;

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.16e}", v);
}

std::string trajectory_csv(const LienardTrajectory& traj, std::span<const double> times) {
    std::string out{kTrajectoryHeader};
    out += '\n';
    for (double t : times) {
        const auto s = traj.at(t);
        out += fmt::format("{},{},{},,,,,,\n", csv_number(t), csv_number(s.theta), csv_number(s.alpha_mod()));
    }
    return out;
}

std::string trajectory_csv(const MeanFieldTrajectory& traj, std::span<const double> times) {
    std::string out{kTrajectoryHeader};
    out += '\n';
    for (double t : times) {
        const auto s = traj.at(t);
        const auto r = meanfield_to_reduced(s);
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_number(t), csv_number(r.theta), csv_number(r.alpha),
                           csv_number(s.sx), csv_number(s.sy), csv_number(s.sz), csv_number(s.x1), csv_number(s.x2),
                           csv_number(s.bloch_radius()));
    }
    return out;
}

std::string intensities_csv(std::span<const IntensitySample> series) {
    std::string out{kIntensityHeader};
    out += '\n';
    for (const auto& s : series)
        out += fmt::format("{},{},{},{},{}\n", csv_number(s.t), csv_number(s.i_atom), csv_number(s.i_field),
                           csv_number(s.e_atom), csv_number(s.e_field));
    return out;
}

std::string momentum_csv(const MomentumDistribution& d) {
    std::string out{kMomentumHeader};
    out += '\n';
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        const cplx fp = d.amp_plus[i];
        const cplx fm = d.amp_minus.empty() ? cplx{} : d.amp_minus[i];
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_number(d.p[i]), csv_number(fp.real()), csv_number(fp.imag()),
                           csv_number(fm.real()), csv_number(fm.imag()), csv_number(d.density_plus(i)),
                           csv_number(d.density_minus(i)));
    }
    return out;
}

void write_text(const fs::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, fmt::format("cannot open '{}' for writing", path.string()));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw Error(ErrorCode::IoError, fmt::format("write to '{}' failed", path.string()));
}

std::string read_text(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, fmt::format("cannot read '{}'", path.string()));
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

StagedDir::StagedDir(fs::path target) : target_(std::move(target)) {
    stage_ = target_;
    stage_ += ".partial";
    std::error_code ec;
    fs::remove_all(stage_, ec);
    if (!fs::create_directories(stage_, ec) || ec)
        throw Error(ErrorCode::IoError,
                    fmt::format("cannot create output directory '{}': {}", stage_.string(), ec.message()));
}

StagedDir::~StagedDir() {
    if (committed_) return;
    std::error_code ec;
    fs::remove_all(stage_, ec);
}

void StagedDir::commit() {
    std::error_code ec;
    fs::remove_all(target_, ec);
    if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot replace '{}': {}", target_.string(), ec.message()));
    fs::rename(stage_, target_, ec);
    if (ec)
        throw Error(ErrorCode::IoError,
                    fmt::format("cannot move '{}' to '{}': {}", stage_.string(), target_.string(), ec.message()));
    committed_ = true;
}

} // namespace srsa
