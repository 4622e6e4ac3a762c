// observables.hpp: energies, intensities and their summary statistics.
//
// ⟨σ₋⟩ = ⟨s_x⟩ − i⟨s_y⟩ and ⟨a⟩ = ⟨X₁⟩ + i⟨X₂⟩. Positive intensity means energy
// leaving the subsystem; 𝓘_f < 0 is field superabsorption.

#pragma once

#include <span>
#include <vector>

#include "srsa/dynamics.hpp"
#include "srsa/params.hpp"

namespace srsa {

struct IntensitySample {
    double t{0.0};
    double i_atom{0.0};
    double i_field{0.0};
    double e_atom{0.0};   // ω₀⟨σ_z⟩/2 = ω₀⟨s_z⟩
    double e_field{0.0};  // ω₀|α|²
};

// N²γω₀|⟨σ₋⟩|², the sum 𝓘_a + 𝓘_f.
double total_intensity(const MeanFieldState& state, const PhysicalParams& params);

// sin(φ_σ − φ_a); undefined (NaN) when either mean vanishes.
double relative_phase_sine(const MeanFieldState& state);

IntensitySample intensities(const MeanFieldState& state, const PhysicalParams& params, double t = 0.0);
IntensitySample intensities(const ReducedState& state, const Phases& phases, const PhysicalParams& params,
                            double t = 0.0);

// Samples at the given times; the reduced version rebuilds mean values with
// the rotating phase solution.
std::vector<IntensitySample> intensity_series(const LienardTrajectory& traj, const InitialConditions& ic,
                                              std::span<const double> times);
std::vector<IntensitySample> intensity_series(const MeanFieldTrajectory& traj, std::span<const double> times);

struct SeriesSummary {
    double peak_time;
    double peak_value;
    std::size_t n_negative_field_intervals;
    double min_field;
    double min_field_time;
    std::vector<double> cycle_periods;
};

// Peak of 𝓘_a with parabolic refinement; counts contiguous runs of
// 𝓘_f < −negative_threshold. Throws EmptySeries.
SeriesSummary summarize(std::span<const IntensitySample> series, double negative_threshold = 0.0,
                        std::span<const Cycle> cycles = {});

} // namespace srsa
