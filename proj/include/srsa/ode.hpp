// ode.hpp: embedded Dormand–Prince 5(4) integrator with stored dense output.
//
// Every accepted step keeps the coefficients of the 4th-order continuous
// extension, so the returned solution can be evaluated anywhere inside the
// integration span after the fact (event finding, uniform resampling,
// finite-difference checks).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa::ode {

template <std::size_t D>
using Vec = std::array<double, D>;

struct Tolerance {
    double abs{1e-10};
    double rel{1e-10};
};

struct Settings {
    Tolerance tol;
    double initial_step{0.0};  // 0 selects the step automatically
    double max_step{0.0};      // 0 means the whole span
    std::size_t max_steps{50'000'000};
};

template <std::size_t D>
class DenseSolution {
public:
    DenseSolution() = default;

    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }
    std::size_t step_count() const { return q_.size(); }
    std::size_t rhs_evaluations() const { return n_eval_; }

    // Accepted step endpoints (strictly increasing) and the states there.
    const std::vector<double>& times() const { return t_; }
    const std::vector<Vec<D>>& states() const { return y_; }

    Vec<D> operator()(double t) const {
        const std::size_t i = locate(t);
        const double h = t_[i + 1] - t_[i];
        const double s = (t - t_[i]) / h;
        Vec<D> y = y_[i];
        for (std::size_t d = 0; d < D; ++d) {
            const auto& q = q_[i];
            y[d] += h * s * (q[0][d] + s * (q[1][d] + s * (q[2][d] + s * q[3][d])));
        }
        return y;
    }

    // Time derivative of the interpolant.
    Vec<D> derivative(double t) const {
        const std::size_t i = locate(t);
        const double h = t_[i + 1] - t_[i];
        const double s = (t - t_[i]) / h;
        Vec<D> dy{};
        for (std::size_t d = 0; d < D; ++d) {
            const auto& q = q_[i];
            dy[d] = q[0][d] + s * (2 * q[1][d] + s * (3 * q[2][d] + s * 4 * q[3][d]));
        }
        return dy;
    }

private:
    template <std::size_t E, class Rhs>
    friend DenseSolution<E> integrate_dopri5(Rhs&& rhs, double t0, double t1, const Vec<E>& y0,
                                             const Settings& settings);

    std::size_t locate(double t) const {
        if (!(t >= t_.front() && t <= t_.back()))
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("dense output queried at t = {} outside [{}, {}]", t, t_.front(), t_.back()));
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - t_.begin());
        i = i == 0 ? 0 : i - 1;
        return std::min(i, q_.size() - 1);
    }

    std::vector<double> t_;
    std::vector<Vec<D>> y_;
    std::vector<std::array<Vec<D>, 4>> q_;
    std::size_t n_eval_{0};
};

namespace detail {

// Dormand–Prince 5(4) tableau.
inline constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                          -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// Continuous extension: y(t0 + s h) = y0 + h Σ_i k_i Σ_j P[i][j] s^(j+1).
inline constexpr std::array<std::array<double, 4>, 7> P{{
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
}};

template <std::size_t D>
bool all_finite(const Vec<D>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t D>
double scaled_norm(const Vec<D>& v, const Vec<D>& y0, const Vec<D>& y1, const Tolerance& tol) {
    double acc = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        const double sc = tol.abs + tol.rel * std::max(std::abs(y0[d]), std::abs(y1[d]));
        acc += (v[d] / sc) * (v[d] / sc);
    }
    return std::sqrt(acc / static_cast<double>(D));
}

template <std::size_t D, class Rhs>
Vec<D> eval(Rhs& rhs, double t, const Vec<D>& y, std::size_t& counter) {
    ++counter;
    try {
        return rhs(t, y);
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{} (at t = {:.17g})", e.what(), t));
    }
}

} // namespace detail

// Integrates dy/dt = rhs(t, y) over [t0, t1] (t1 > t0). rhs is any callable
// (double, const Vec<D>&) -> Vec<D>; errors it throws are re-raised with the
// failure time attached.
template <std::size_t D, class Rhs>
DenseSolution<D> integrate_dopri5(Rhs&& rhs, double t0, double t1, const Vec<D>& y0, const Settings& settings) {
    using namespace detail;
    if (!(t1 > t0))
        throw Error(ErrorCode::InvalidArgument, fmt::format("integration span requires t1 > t0 (got [{}, {}])", t0, t1));
    if (!(settings.tol.abs > 0 && settings.tol.rel > 0))
        throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (!all_finite(y0)) throw Error(ErrorCode::NonFiniteState, "initial state is not finite");

    DenseSolution<D> sol;
    std::size_t& n_eval = sol.n_eval_;
    const Tolerance& tol = settings.tol;
    const double span = t1 - t0;
    const double max_step = settings.max_step > 0 ? std::min(settings.max_step, span) : span;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    Vec<D> y = y0;
    Vec<D> f = eval<D>(rhs, t0, y, n_eval);
    if (!all_finite(f)) throw Error(ErrorCode::NonFiniteState, fmt::format("derivative not finite at t = {}", t0));

    double h = settings.initial_step;
    if (h <= 0) {
        Vec<D> zero{};
        const double d0 = scaled_norm(y, y, zero, tol);
        const double d1 = scaled_norm(f, y, zero, tol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
        h0 = std::min(h0, max_step);
        Vec<D> y1;
        for (std::size_t d = 0; d < D; ++d) y1[d] = y[d] + h0 * f[d];
        const Vec<D> f1 = eval<D>(rhs, t0 + h0, y1, n_eval);
        Vec<D> df;
        for (std::size_t d = 0; d < D; ++d) df[d] = (f1[d] - f[d]) / h0;
        const double d2 = scaled_norm(df, y, zero, tol);
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
        h = std::min(100 * h0, h1);
    }
    h = std::min(h, max_step);

    sol.t_.push_back(t0);
    sol.y_.push_back(y);

    double t = t0;
    std::array<Vec<D>, 7> k;
    bool last_rejected = false;
    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > settings.max_steps)
            throw Error(ErrorCode::StepSizeUnderflow, fmt::format("step budget exhausted at t = {:.17g}", t));
        const double h_min = 16 * eps * std::max(std::abs(t), std::abs(t1));
        if (h < h_min)
            throw Error(ErrorCode::StepSizeUnderflow, fmt::format("step size {:.3e} below {:.3e} at t = {:.17g}", h, h_min, t));
        if (t + h > t1 || t1 - (t + h) < h_min) h = t1 - t;

        k[0] = f;
        Vec<D> ys;
        auto stage = [&](int s, auto&& combine) {
            for (std::size_t d = 0; d < D; ++d) ys[d] = y[d] + h * combine(d);
            k[s] = eval<D>(rhs, t + c[s] * h, ys, n_eval);
        };
        stage(1, [&](std::size_t d) { return a21 * k[0][d]; });
        stage(2, [&](std::size_t d) { return a31 * k[0][d] + a32 * k[1][d]; });
        stage(3, [&](std::size_t d) { return a41 * k[0][d] + a42 * k[1][d] + a43 * k[2][d]; });
        stage(4, [&](std::size_t d) { return a51 * k[0][d] + a52 * k[1][d] + a53 * k[2][d] + a54 * k[3][d]; });
        stage(5, [&](std::size_t d) {
            return a61 * k[0][d] + a62 * k[1][d] + a63 * k[2][d] + a64 * k[3][d] + a65 * k[4][d];
        });
        Vec<D> y_new;
        for (std::size_t d = 0; d < D; ++d) {
            double acc = 0.0;
            for (int s = 0; s < 6; ++s) acc += b5[s] * k[s][d];
            y_new[d] = y[d] + h * acc;
        }
        const bool finite = all_finite(y_new);
        if (finite) k[6] = eval<D>(rhs, t + h, y_new, n_eval);
        if (!finite || !all_finite(k[6])) {
            h *= 0.25;
            if (h < h_min)
                throw Error(ErrorCode::NonFiniteState, fmt::format("state became non-finite near t = {:.17g}", t));
            last_rejected = true;
            continue;
        }

        Vec<D> err;
        for (std::size_t d = 0; d < D; ++d) {
            double acc = 0.0;
            for (int s = 0; s < 7; ++s) acc += (b5[s] - b4[s]) * k[s][d];
            err[d] = h * acc;
        }
        const double en = scaled_norm(err, y, y_new, tol);
        if (!std::isfinite(en)) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        if (en <= 1.0) {
            std::array<Vec<D>, 4> q{};
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t d = 0; d < D; ++d) {
                    double acc = 0.0;
                    for (int s = 0; s < 7; ++s) acc += k[s][d] * P[s][j];
                    q[j][d] = acc;
                }
            const double t_new = (h == t1 - t) ? t1 : t + h;
            sol.q_.push_back(q);
            sol.t_.push_back(t_new);
            sol.y_.push_back(y_new);
            t = t_new;
            y = y_new;
            f = k[6];
            double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, max_step);
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return sol;
}

// Sign changes of g on the sorted grid, refined by bisection until the bracket
// is below rel_tol relative to max(|t|, grid span). Exact zeros on grid nodes
// are reported once.
template <class G>
std::vector<double> find_roots(G&& g, std::span<const double> grid, double rel_tol = 1e-12) {
    std::vector<double> roots;
    if (grid.size() < 2) return roots;
    const double span = grid.back() - grid.front();
    double ga = g(grid[0]);
    if (ga == 0.0) roots.push_back(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double a = grid[i - 1], b = grid[i];
        const double gb = g(b);
        if (gb == 0.0) {
            roots.push_back(b);
        } else if (ga != 0.0 && ((ga < 0) != (gb < 0))) {
            double fa = ga;
            while (b - a > rel_tol * std::max(std::abs(a), span)) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = g(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { b = m; }
            }
            roots.push_back(0.5 * (a + b));
        }
        ga = gb;
    }
    return roots;
}

// Accepted-step grid with every step split into `subdivisions` equal parts.
template <std::size_t D>
std::vector<double> refined_grid(const DenseSolution<D>& sol, std::size_t subdivisions) {
    std::vector<double> grid;
    const auto& t = sol.times();
    grid.reserve((t.size() - 1) * subdivisions + 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        for (std::size_t j = 0; j < subdivisions; ++j)
            grid.push_back(t[i] + (t[i + 1] - t[i]) * static_cast<double>(j) / static_cast<double>(subdivisions));
    grid.push_back(t.back());
    return grid;
}

} // namespace srsa::ode
