#include "srsa/deflection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

std::string_view to_string(Normalization n) noexcept {
    return n == Normalization::UnitArea ? "unit_area" : "unit_l2";
}

double GridSpec::nyquist() const { return kPi / dx(); }

GridSpec auto_grid(double sigma, double max_shift, double half_width_sigmas) {
    if (!(sigma > 0)) throw Error(ErrorCode::InvalidArgument, fmt::format("sigma must be > 0 (got {})", sigma));
    GridSpec g{half_width_sigmas * sigma, kMinGridPoints};
    const double need = 1.5 * (std::abs(max_shift) + 6.0 / sigma);
    while (g.dx() > sigma / 8.0 || g.nyquist() < need) {
        if (g.n >= (std::size_t{1} << 26))
            throw Error(ErrorCode::GridAliasing,
                        fmt::format("no grid up to 2^26 points resolves momentum {:.6g}", need));
        g.n *= 2;
    }
    return g;
}

double SpatialProfile::norm_sq() const {
    double s = 0.0;
    for (double v : theta) s += v * v;
    return s * dx();
}

std::vector<std::string> SpatialProfile::warnings() const {
    std::vector<std::string> out;
    if (k_wave * sigma > kNarrowProfileLimit)
        out.push_back(fmt::format("k*sigma << 1 violated: k*sigma = {:.6g}", k_wave * sigma));
    return out;
}

SpatialProfile make_profile(double sigma, Normalization normalization, const GridSpec& grid, double k_wave) {
    if (!(sigma > 0)) throw Error(ErrorCode::InvalidArgument, fmt::format("sigma must be > 0 (got {})", sigma));
    if (grid.n < kMinGridPoints || !std::has_single_bit(grid.n))
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("grid needs a power-of-two point count >= {} (got {})", kMinGridPoints, grid.n));
    if (grid.half_width < kMinHalfWidthSigmas * sigma * (1 - 1e-12))
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("grid half-width {:.6g} below {}*sigma", grid.half_width, kMinHalfWidthSigmas));
    if (grid.dx() > sigma / 8.0)
        throw Error(ErrorCode::GridTooCoarse,
                    fmt::format("dx = {:.6g} exceeds sigma/8 = {:.6g}", grid.dx(), sigma / 8.0));
    SpatialProfile prof{sigma, k_wave, grid, normalization, {}, {}};
    prof.x.resize(grid.n);
    prof.theta.resize(grid.n);
    const double dx = grid.dx();
    const double amp = 1.0 / (std::sqrt(2.0 * kPi) * sigma);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = -grid.half_width + (static_cast<double>(j) + 0.5) * dx;
        prof.x[j] = x;
        prof.theta[j] = amp * std::exp(-x * x / (2.0 * sigma * sigma));
    }
    if (normalization == Normalization::UnitL2) {
        const double c = 1.0 / std::sqrt(prof.norm_sq());
        for (double& v : prof.theta) v *= c;
    }
    return prof;
}

double CouplingModel::coupling(double x) const { return mu_e * std::sin(k_wave * x); }
double CouplingModel::coupling_linear(double x) const { return mu_e * k_wave * x; }

namespace {

std::vector<cplx> transform_modulated(const SpatialProfile& prof, auto&& modulation) {
    std::vector<cplx> f(prof.x.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = prof.theta[j] * modulation(prof.x[j]);
    return continuum_transform(f, prof.x.front(), prof.dx());
}

std::vector<cplx> shifted_transform(const SpatialProfile& prof, double shift) {
    if (shift == 0.0) return transform_modulated(prof, [](double) { return cplx{1.0, 0.0}; });
    return transform_modulated(prof, [shift](double x) { return std::polar(1.0, shift * x); });
}

} // namespace

MomentumDistribution fourier_amplitude(const SpatialProfile& profile, double shift) {
    MomentumDistribution d;
    d.p = momentum_grid(profile.grid.n, profile.dx());
    d.amp_plus = shifted_transform(profile, shift);
    d.regime = "free";
    return d;
}

cplx gaussian_transform(double p, double sigma, Normalization normalization) {
    double v = std::exp(-0.5 * p * p * sigma * sigma) / std::sqrt(2.0 * kPi);
    if (normalization == Normalization::UnitL2) v *= std::sqrt(2.0 * std::sqrt(kPi) * sigma);
    return {v, 0.0};
}

double gaussian_momentum_std(double sigma) { return 1.0 / (std::sqrt(2.0) * sigma); }

double kappa_limit(const PhysicalParams& params, const CouplingModel& coupling, double alpha0) {
    return 2.0 * coupling.mu_e * alpha0 / (params.sqrt_n() * params.gamma);
}

double kappa(double t, const PhysicalParams& params, const CouplingModel& coupling, double alpha0, double tau_d) {
    return kappa_limit(params, coupling, alpha0) * std::tanh((t - tau_d) / params.emission_time());
}

MomentumDistribution overdamped_momentum_state(double t, const SpatialProfile& profile, const PhysicalParams& params,
                                               const InitialConditions& ic, const CouplingModel& coupling) {
    const auto sol = OverdampedSolution::make(ic, params);
    const double th = theta_h(t, sol.tau_d, sol.tau);
    const double kk = coupling.k_wave * kappa(t, params, coupling, ic.alpha0, sol.tau_d);
    const double wt = params.omega * t;
    const cplx ph_plus = std::polar(1.0 / std::sqrt(2.0), -0.5 * (wt + th));
    const cplx ph_minus = std::polar(1.0 / std::sqrt(2.0), -0.5 * (wt - th));
    MomentumDistribution d;
    d.t = t;
    d.p = momentum_grid(profile.grid.n, profile.dx());
    d.amp_plus = shifted_transform(profile, kk);
    d.amp_minus = shifted_transform(profile, -kk);
    for (auto& v : d.amp_plus) v *= ph_plus;
    for (auto& v : d.amp_minus) v *= ph_minus;
    d.regime = "overdamped";
    return d;
}

double lobe_momentum(double t, const PhysicalParams& params, const CouplingModel& coupling) {
    return params.sqrt_n() * coupling.mu_e * coupling.k_wave * t;
}

MomentumDistribution underdamped_amplitudes_direct(double t, const SpatialProfile& profile,
                                                   const PhysicalParams& params, const CouplingModel& coupling,
                                                   const Envelope& env) {
    const double kl = lobe_momentum(t, params, coupling);
    if (std::abs(kl) > profile.grid.nyquist())
        throw Error(ErrorCode::GridAliasing,
                    fmt::format("lobe momentum {:.6g} exceeds grid Nyquist {:.6g} at t = {:.6g}", kl,
                                profile.grid.nyquist(), t));
    MomentumDistribution d;
    d.t = t;
    d.p = momentum_grid(profile.grid.n, profile.dx());
    d.amp_plus = transform_modulated(profile, [&](double x) {
        return cplx{0.0, std::cos(env.r * std::cos(kl * x + env.phi_r))};
    });
    d.amp_minus = transform_modulated(profile, [&](double x) {
        return cplx{std::sin(env.r * std::cos(kl * x + env.phi_r)), 0.0};
    });
    d.regime = "underdamped";
    return d;
}

MomentumDistribution underdamped_amplitudes_bessel(double t, const SpatialProfile& profile,
                                                   const PhysicalParams& params, const CouplingModel& coupling,
                                                   const Envelope& env, BesselForm form) {
    const double kl = lobe_momentum(t, params, coupling);
    const double j0 = bessel_j0_approx(env.r, form);
    const double j1 = bessel_j1_approx(env.r, form);
    const auto f0 = shifted_transform(profile, 0.0);
    const auto fp = shifted_transform(profile, kl);
    const auto fm = shifted_transform(profile, -kl);
    const cplx e_plus = std::polar(1.0, env.phi_r), e_minus = std::polar(1.0, -env.phi_r);
    MomentumDistribution d;
    d.t = t;
    d.p = momentum_grid(profile.grid.n, profile.dx());
    d.amp_plus.resize(f0.size());
    d.amp_minus.resize(f0.size());
    for (std::size_t i = 0; i < f0.size(); ++i) {
        d.amp_plus[i] = cplx{0.0, j0} * f0[i];
        d.amp_minus[i] = j1 * (e_plus * fp[i] + e_minus * fm[i]);
    }
    d.regime = "underdamped";
    return d;
}

double l2_distance(const MomentumDistribution& a, const MomentumDistribution& b) {
    if (a.p.size() != b.p.size()) throw Error(ErrorCode::InvalidArgument, "distributions on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) {
        s += std::norm(a.amp_plus[i] - b.amp_plus[i]);
        const cplx am = a.amp_minus.empty() ? cplx{} : a.amp_minus[i];
        const cplx bm = b.amp_minus.empty() ? cplx{} : b.amp_minus[i];
        s += std::norm(am - bm);
    }
    return std::sqrt(s * a.dp());
}

std::vector<double> find_peaks(const std::vector<double>& p, const std::vector<double>& density,
                               double rel_threshold) {
    std::vector<double> out;
    if (density.size() < 3) return out;
    const double top = *std::max_element(density.begin(), density.end());
    if (!(top > 0)) return out;
    for (std::size_t i = 1; i + 1 < density.size(); ++i) {
        const double y0 = density[i - 1], y1 = density[i], y2 = density[i + 1];
        if (!(y1 > y0 && y1 >= y2) || y1 < rel_threshold * top) continue;
        const double den = y0 - 2 * y1 + y2;
        const double off = den != 0.0 ? 0.5 * (y0 - y2) / den : 0.0;
        out.push_back(p[i] + off * (p[i + 1] - p[i]));
    }
    return out;
}

namespace {

BranchMoments branch_moments(const std::vector<double>& p, const std::vector<double>& dens, double dp) {
    BranchMoments m{};
    double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s0 += dens[i];
        s1 += dens[i] * p[i];
    }
    m.probability = s0 * dp;
    if (s0 > 0) {
        m.mean = s1 / s0;
        double s2 = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s2 += dens[i] * (p[i] - m.mean) * (p[i] - m.mean);
        m.std = std::sqrt(s2 / s0);
    }
    m.peaks = find_peaks(p, dens);
    return m;
}

} // namespace

MomentumMoments momentum_moments(const MomentumDistribution& dist) {
    if (dist.p.empty() || dist.amp_plus.empty())
        throw Error(ErrorCode::EmptyDistribution, "momentum distribution has no samples");
    std::vector<double> dp(dist.p.size()), dm(dist.p.size());
    for (std::size_t i = 0; i < dist.p.size(); ++i) {
        dp[i] = dist.density_plus(i);
        dm[i] = dist.density_minus(i);
    }
    MomentumMoments out;
    out.plus = branch_moments(dist.p, dp, dist.dp());
    out.minus = branch_moments(dist.p, dm, dist.dp());
    out.total_probability = out.plus.probability + out.minus.probability;
    return out;
}

} // namespace srsa
