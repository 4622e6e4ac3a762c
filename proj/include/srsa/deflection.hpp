// deflection.hpp: spatial profile and momentum-space amplitudes of the
// deflected sample.
//
// Positions are in units of 1/k and momenta in units of k (k_wave is kept as
// a field for clarity but the figures use k = 1).

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "srsa/analytic.hpp"
#include "srsa/bessel.hpp"
#include "srsa/fourier.hpp"
#include "srsa/params.hpp"

namespace srsa {

enum class Normalization { UnitArea, UnitL2 };
std::string_view to_string(Normalization n) noexcept;

struct GridSpec {
    double half_width;  // L
    std::size_t n;      // points, power of two
    double dx() const { return 2.0 * half_width / static_cast<double>(n); }
    double nyquist() const;  // π/Δx
};

inline constexpr std::size_t kMinGridPoints = 4096;
inline constexpr double kMinHalfWidthSigmas = 8.0;

// L = half_width_sigmas·σ and the smallest power of two n ≥ 4096 with
// Δx ≤ σ/8 and π/Δx ≥ 1.5·(max_shift + 6/σ).
GridSpec auto_grid(double sigma, double max_shift, double half_width_sigmas = kMinHalfWidthSigmas);

struct SpatialProfile {
    double sigma;
    double k_wave{1.0};
    GridSpec grid;
    Normalization normalization;
    std::vector<double> x;      // cell-centred: x_j = −L + (j + ½)Δx
    std::vector<double> theta;  // Θ(x_j)

    double dx() const { return grid.dx(); }
    double norm_sq() const;  // Σ|Θ|²Δx
    std::vector<std::string> warnings() const;
};

inline constexpr double kNarrowProfileLimit = 0.5;

// Θ(x) = exp(−x²/2σ²)/(√(2π)σ); UnitL2 rescales the samples to Σ|Θ|²Δx = 1.
// Throws GridTooCoarse when Δx > σ/8.
SpatialProfile make_profile(double sigma, Normalization normalization, const GridSpec& grid, double k_wave = 1.0);

struct CouplingModel {
    double mu_e{1.0};  // peak Rabi scale μℰ
    double k_wave{1.0};

    double coupling(double x) const;         // μℰ sin(kx)
    double coupling_linear(double x) const;  // μℰ k x
};

struct MomentumDistribution {
    double t{0.0};
    std::vector<double> p;
    std::vector<cplx> amp_plus;
    std::vector<cplx> amp_minus;  // empty for a single amplitude
    std::string regime;

    double dp() const { return p.size() > 1 ? p[1] - p[0] : 0.0; }
    double density_plus(std::size_t i) const { return std::norm(amp_plus[i]); }
    double density_minus(std::size_t i) const { return amp_minus.empty() ? 0.0 : std::norm(amp_minus[i]); }
};

// F(p − shift) by discrete transform of Θ(x)e^{i·shift·x}.
MomentumDistribution fourier_amplitude(const SpatialProfile& profile, double shift = 0.0);

// Closed-form transform of the sampled Gaussian's continuum counterpart.
cplx gaussian_transform(double p, double sigma, Normalization normalization);

// Standard deviation of |F|² for the Gaussian: 1/(√2 σ).
double gaussian_momentum_std(double sigma);

// (2μℰα₀/(√N γ)) tanh((t − τ_D)/τ)
double kappa(double t, const PhysicalParams& params, const CouplingModel& coupling, double alpha0, double tau_d);
double kappa_limit(const PhysicalParams& params, const CouplingModel& coupling, double alpha0);

// e^{−iφ±}F(p ∓ kκ)/√2 with φ± = (ωt ± θ_h)/2.
MomentumDistribution overdamped_momentum_state(double t, const SpatialProfile& profile, const PhysicalParams& params,
                                               const InitialConditions& ic, const CouplingModel& coupling);

struct Envelope {
    double r;
    double phi_r;
};

inline Envelope envelope_at(double t, const UnderdampedSolution& sol) { return {sol.envelope(t), sol.phi_r}; }

// Lobe momentum √N μℰ k t.
double lobe_momentum(double t, const PhysicalParams& params, const CouplingModel& coupling);

// F₊ = i·FT[Θ cos(R cos ζ)], F₋ = FT[Θ sin(R cos ζ)], ζ = √N μℰ k x t + φ_r.
// Throws GridAliasing when the lobe momentum exceeds π/Δx.
MomentumDistribution underdamped_amplitudes_direct(double t, const SpatialProfile& profile,
                                                   const PhysicalParams& params, const CouplingModel& coupling,
                                                   const Envelope& env);

// F₊ ≈ iJ₀F(p), F₋ ≈ J₁[e^{iφ_r}F(p − K) + e^{−iφ_r}F(p + K)].
MomentumDistribution underdamped_amplitudes_bessel(double t, const SpatialProfile& profile,
                                                   const PhysicalParams& params, const CouplingModel& coupling,
                                                   const Envelope& env, BesselForm form = BesselForm::Polynomial);

// sqrt(Σ(|ΔF₊|² + |ΔF₋|²)Δp)
double l2_distance(const MomentumDistribution& a, const MomentumDistribution& b);

// Strict local maxima of a sampled density at or above rel_threshold·max,
// refined by a three-point parabola.
std::vector<double> find_peaks(const std::vector<double>& p, const std::vector<double>& density,
                               double rel_threshold = 1e-3);

struct BranchMoments {
    double probability;
    double mean;
    double std;
    std::vector<double> peaks;
};

struct MomentumMoments {
    BranchMoments plus;
    BranchMoments minus;
    double total_probability;
};

// Trapezoid moments of |F₊|² and |F₋|². Throws EmptyDistribution.
MomentumMoments momentum_moments(const MomentumDistribution& dist);

} // namespace srsa
