// io.hpp: CSV serialization and staged output directories.
//
// Floats are written as {:.16e} (17 significant digits) so equal inputs give
// byte-identical files.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "srsa/deflection.hpp"
#include "srsa/dynamics.hpp"
#include "srsa/observables.hpp"

namespace srsa {

std::string csv_number(double v);

inline constexpr std::string_view kTrajectoryHeader = "t,theta,alpha_mod,sx,sy,sz,x1,x2,R";
inline constexpr std::string_view kIntensityHeader = "t,i_atom,i_field,e_atom,e_field";
inline constexpr std::string_view kMomentumHeader =
    "p_over_k,re_F_plus,im_F_plus,re_F_minus,im_F_minus,density_plus,density_minus";

// Reduced runs leave the mean-field columns empty; theta is the unwrapped
// Liénard angle and alpha_mod = |a|.
std::string trajectory_csv(const LienardTrajectory& traj, std::span<const double> times);
// theta is the Bloch polar angle in [0, π].
std::string trajectory_csv(const MeanFieldTrajectory& traj, std::span<const double> times);
std::string intensities_csv(std::span<const IntensitySample> series);
std::string momentum_csv(const MomentumDistribution& dist);

// Writes the whole file or throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

// Output directory built under a sibling temporary name and renamed into
// place by commit(); an uncommitted stage is removed on destruction.
class StagedDir {
public:
    explicit StagedDir(std::filesystem::path target);
    ~StagedDir();
    StagedDir(const StagedDir&) = delete;
    StagedDir& operator=(const StagedDir&) = delete;

    const std::filesystem::path& path() const { return stage_; }
    const std::filesystem::path& target() const { return target_; }
    // Replaces any existing target.
    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path stage_;
    bool committed_{false};
};

} // namespace srsa
