#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "srsa/deflection.hpp"
#include "srsa/error.hpp"

using namespace srsa;

namespace {

double sum_sq(const SpatialProfile& p) { return p.norm_sq(); }

double nearest(const std::vector<double>& peaks, double target) {
    double best = INFINITY;
    for (double x : peaks)
        if (std::abs(x - target) < std::abs(best - target)) best = x;
    return best;
}

SpatialProfile standard_profile(Normalization n = Normalization::UnitL2, std::size_t points = 4096) {
    return make_profile(0.2, n, GridSpec{1.6, points});
}

} // namespace

TEST_SUITE("deflection") {

TEST_CASE("profile normalizations") {
    const auto dens = standard_profile(Normalization::UnitArea);
    double integral = 0.0;
    for (double v : dens.theta) integral += v * dens.dx();
    CHECK(std::abs(integral - 1.0) < 1e-8);
    const auto l2 = standard_profile(Normalization::UnitL2);
    CHECK(std::abs(sum_sq(l2) - 1.0) < 1e-8);
    CHECK(std::exp(-0.5 * 1.6 * 1.6 / 0.04) < 1e-13);
    CHECK(dens.theta.back() / (1.0 / (std::sqrt(2 * kPi) * 0.2)) < 1e-13);
    CHECK(dens.x.front() == doctest::Approx(-1.6 + 0.5 * dens.dx()));
    CHECK(dens.warnings().empty());
    CHECK_FALSE(make_profile(1.0, Normalization::UnitL2, GridSpec{8.0, 4096}).warnings().empty());
}

TEST_CASE("profile grid validation") {
    try {
        make_profile(0.2, Normalization::UnitL2, GridSpec{80.0, 4096});
        FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridTooCoarse);
    }
    CHECK_THROWS_AS(make_profile(0.2, Normalization::UnitL2, GridSpec{1.6, 2048}), Error);
    CHECK_THROWS_AS(make_profile(0.2, Normalization::UnitL2, GridSpec{1.6, 5000}), Error);
    CHECK_THROWS_AS(make_profile(0.2, Normalization::UnitL2, GridSpec{1.0, 4096}), Error);
    CHECK_THROWS_AS(make_profile(-0.2, Normalization::UnitL2, GridSpec{1.6, 4096}), Error);
}

TEST_CASE("automatic grid sizing") {
    const auto g = auto_grid(0.2, 12.0);
    CHECK(g.n >= kMinGridPoints);
    CHECK(g.dx() <= 0.2 / 8);
    CHECK(g.nyquist() >= 1.5 * (12.0 + 30.0));
    const auto big = auto_grid(0.2, 5000.0);
    CHECK(big.nyquist() >= 1.5 * 5030.0);
    CHECK(big.n > g.n);
}

TEST_CASE("discrete transform against the closed-form Gaussian") {
    const auto prof = make_profile(0.2, Normalization::UnitArea, GridSpec{1.6, 16384});
    const auto d = fourier_amplitude(prof);
    REQUIRE(d.p[d.p.size() / 2] == 0.0);
    CHECK(d.amp_plus[d.p.size() / 2].real() == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-10));
    double worst = 0.0;
    for (std::size_t i = 0; i < d.p.size(); ++i)
        worst = std::max(worst, std::abs(d.amp_plus[i] - gaussian_transform(d.p[i], 0.2, Normalization::UnitArea)));
    MESSAGE("max |F_discrete - F_analytic| = " << worst);
    CHECK(worst <= 1e-8);
    CHECK(d.dp() == doctest::Approx(2 * kPi / (16384 * prof.dx())).epsilon(1e-12));

    const auto l2 = standard_profile();
    const auto dl = fourier_amplitude(l2);
    double wl = 0.0;
    for (std::size_t i = 0; i < dl.p.size(); ++i)
        wl = std::max(wl, std::abs(dl.amp_plus[i] - gaussian_transform(dl.p[i], 0.2, Normalization::UnitL2)));
    CHECK(wl <= 1e-8);
}

TEST_CASE("shift theorem") {
    const auto prof = standard_profile();
    for (double shift : {3.3, -7.9, 20.0}) {
        const auto d = fourier_amplitude(prof, shift);
        const auto m = momentum_moments(d);
        REQUIRE(m.plus.peaks.size() == 1);
        CHECK(std::abs(m.plus.peaks[0] - shift) <= d.dp());
    }
}

TEST_CASE("Gaussian momentum width") {
    for (double sigma : {0.1, 0.2, 0.4}) {
        const auto prof = make_profile(sigma, Normalization::UnitArea, auto_grid(sigma, 0.0));
        const auto m = momentum_moments(fourier_amplitude(prof));
        CHECK(m.plus.std == doctest::Approx(gaussian_momentum_std(sigma)).epsilon(1e-6));
        CHECK(std::abs(m.plus.mean) < 1e-10);
    }
}

TEST_CASE("coupling model near the node") {
    const CouplingModel c{1.0, 1.0};
    for (double x = -0.25; x <= 0.25; x += 0.005)
        CHECK(std::abs(c.coupling(x) - c.coupling_linear(x)) <= 0.01 * c.mu_e);
}

TEST_CASE("kappa") {
    const auto p = fixtures::fig3_params();
    const CouplingModel c;
    CHECK(kappa(0.3, p, c, 0.1, 0.3) == 0.0);
    CHECK(kappa(1e3, p, c, 0.1, 0.3) == doctest::Approx(2 * 0.1 / (1e3 * 5e-3)).epsilon(1e-14));
    CHECK(kappa_limit(p, c, 0.1) == doctest::Approx(0.04));
    CHECK(kappa(0.1, p, c, 0.1, 0.3) < 0.0);
    for (double t : {0.0, 0.5, 7.0}) CHECK(kappa(t, p, c, 0.0, 0.3) == 0.0);
}

TEST_CASE("overdamped momentum state") {
    const auto prof = standard_profile();
    const auto p = fixtures::fig3_params();
    InitialConditions ic = fixtures::fig3_ic();
    ic.alpha0 = 0.0;
    const auto d = overdamped_momentum_state(1e-3, prof, p, ic, CouplingModel{});
    const auto f = fourier_amplitude(prof);
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        CHECK(d.density_plus(i) == doctest::Approx(0.5 * std::norm(f.amp_plus[i])).epsilon(1e-12).scale(1e-30));
        CHECK(d.density_plus(i) + d.density_minus(i) ==
              doctest::Approx(std::norm(f.amp_plus[i])).epsilon(1e-12).scale(1e-30));
    }
}

TEST_CASE("overdamped branch peaks follow the momentum transfer") {
    const auto prof = standard_profile();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> mu(50.0, 400.0), a0(0.05, 0.2), frac(0.5, 4.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = fixtures::fig3_params();
        const auto ic = InitialConditions{2e-6, kPi / 2, a0(rng), 0.0};
        const CouplingModel c{mu(rng), 1.0};
        const auto sol = OverdampedSolution::make(ic, p);
        const double t = sol.tau_d + frac(rng) * sol.tau;
        const double kk = kappa(t, p, c, ic.alpha0, sol.tau_d);
        const auto m = momentum_moments(overdamped_momentum_state(t, prof, p, ic, c));
        REQUIRE(m.plus.peaks.size() == 1);
        REQUIRE(m.minus.peaks.size() == 1);
        const double dp = 2 * kPi / (2 * prof.grid.half_width);
        CHECK(std::abs(m.plus.peaks[0] - kk) <= dp);
        CHECK(std::abs(m.minus.peaks[0] + kk) <= dp);
    }
}

TEST_CASE("overdamped separation grows after the delay time") {
    const auto p = fixtures::fig3_params();
    const auto ic = fixtures::fig3_ic();
    const auto sol = OverdampedSolution::make(ic, p);
    const CouplingModel c;
    double prev = -1.0;
    for (double t = sol.tau_d; t < sol.tau_d + 8 * sol.tau; t += 0.25 * sol.tau) {
        const double sep = 2 * kappa(t, p, c, ic.alpha0, sol.tau_d);
        CHECK(sep >= prev);
        prev = sep;
    }
}

TEST_CASE("underdamped direct transform") {
    const auto prof = standard_profile();
    const auto p = fixtures::fig4_params();
    const CouplingModel c;
    const auto f = fourier_amplitude(prof);
    const auto zero = underdamped_amplitudes_direct(0.06, prof, p, c, Envelope{0.0, 0.3});
    for (std::size_t i = 0; i < zero.p.size(); ++i) {
        CHECK(std::abs(zero.amp_plus[i] - cplx{0.0, 1.0} * f.amp_plus[i]) < 1e-15);
        CHECK(std::abs(zero.amp_minus[i]) == 0.0);
    }

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> rr(0.0, 2.5), tt(0.0, 0.12), ph(-kPi, kPi);
    const double norm = prof.norm_sq();
    for (int i = 0; i < 10; ++i) {
        const auto d = underdamped_amplitudes_direct(tt(rng), prof, p, c, Envelope{rr(rng), ph(rng)});
        CHECK(momentum_moments(d).total_probability == doctest::Approx(norm).epsilon(1e-6));
    }

    // even profile and φ_r = 0: |F₋(p)| = |F₋(−p)|
    const auto sym = underdamped_amplitudes_direct(0.07, prof, p, c, Envelope{0.8, 0.0});
    const std::size_t n = sym.p.size();
    for (std::size_t m = 1; m < n; ++m) CHECK(std::abs(std::abs(sym.amp_minus[m]) - std::abs(sym.amp_minus[n - m])) < 1e-12);

    try {
        underdamped_amplitudes_direct(100.0, prof, p, c, Envelope{0.5, 0.0});
        FAIL("expected GridAliasing");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridAliasing);
    }
}

TEST_CASE("Bessel approximation") {
    const auto prof = standard_profile();
    const auto p = fixtures::fig4_params();
    const CouplingModel c;
    const double t = 0.3;  // lobes at ±30k, far outside the 1/σ width
    const auto d0 = underdamped_amplitudes_direct(t, prof, p, c, Envelope{0.0, 0.4});
    const auto b0 = underdamped_amplitudes_bessel(t, prof, p, c, Envelope{0.0, 0.4});
    CHECK(l2_distance(d0, b0) < 1e-14);

    const auto d1 = underdamped_amplitudes_direct(t, prof, p, c, Envelope{0.1, 0.4});
    const auto b1 = underdamped_amplitudes_bessel(t, prof, p, c, Envelope{0.1, 0.4});
    MESSAGE("L2 deviation at R = 0.1: " << l2_distance(d1, b1));
    CHECK(l2_distance(d1, b1) <= 0.1 * 0.1 / 4);

    for (double r : {0.05, 0.1, 0.2}) {
        const auto d = underdamped_amplitudes_direct(t, prof, p, c, Envelope{r, 0.4});
        const auto b = underdamped_amplitudes_bessel(t, prof, p, c, Envelope{r, 0.4});
        CHECK(l2_distance(d, b) / (r * r) <= 0.5);
        const auto m = momentum_moments(d);
        CHECK(m.plus.probability == doctest::Approx(std::pow(bessel_j(0, r), 2)).epsilon(0.02 * r * r));
        CHECK(m.minus.probability == doctest::Approx(2 * 0.25 * r * r).epsilon(0.02));
        REQUIRE(m.minus.peaks.size() == 2);
        const double k = lobe_momentum(t, p, c);
        CHECK(std::abs(nearest(m.minus.peaks, k) - k) <= d.dp());
        CHECK(std::abs(nearest(m.minus.peaks, -k) + k) <= d.dp());
        CHECK(std::abs(m.minus.mean) < 1e-8);
    }
}

TEST_CASE("undeflected branch dominates below unit envelope") {
    const auto prof = standard_profile();
    const auto p = fixtures::fig4_params();
    for (double r : {0.1, 0.5, 0.9, 0.99}) {
        const auto m = momentum_moments(underdamped_amplitudes_direct(0.08, prof, p, CouplingModel{}, Envelope{r, 0.2}));
        CHECK(m.plus.probability > m.minus.probability);
    }
}

TEST_CASE("empty distribution") {
    MomentumDistribution d;
    CHECK_THROWS_AS(momentum_moments(d), Error);
}

}
