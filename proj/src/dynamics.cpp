#include "srsa/dynamics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

ReducedState lienard_rhs(const ReducedState& state, const PhysicalParams& params) {
    const double s = std::sin(state.theta);
    const double b = params.collective_coupling();
    return {0.5 * params.collective_decay() * s - 2.0 * b * state.alpha, -0.5 * b * s};
}

Amplification nonlinear_amplification(const MeanFieldState& st, const PhysicalParams& params) {
    const double perp = st.transverse_sq();
    if (!(perp >= kDegenerateBlochFloor))
        throw Error(ErrorCode::DegenerateBloch,
                    fmt::format("sx^2 + sy^2 = {:.3e} below {:.0e}", perp, kDegenerateBlochFloor));
    const double b = params.collective_coupling();
    return {b * (st.sx * st.x1 - st.sy * st.x2) / perp,
            b * (st.sx * st.x2 + st.sy * st.x1) / perp - 0.5 * params.collective_decay()};
}

MeanFieldState full_rhs(const MeanFieldState& st, const PhysicalParams& params, SzRate sz_rate) {
    const auto [lr, li] = nonlinear_amplification(st, params);
    const double w = params.omega;
    const double b = params.collective_coupling();
    const double factor = sz_rate == SzRate::Conserving ? 2.0 : 1.0;
    MeanFieldState d;
    d.sx = -w * st.sy + 2.0 * st.sz * (lr * st.sy - li * st.sx);
    d.sy = w * st.sx - 2.0 * st.sz * (lr * st.sx + li * st.sy);
    d.sz = factor * li * st.transverse_sq();
    d.x1 = w * st.x2 - b * st.sy;
    d.x2 = -w * st.x1 - b * st.sx;
    d.chi = -b * (st.sx * st.x2 + st.sy * st.x1);
    return d;
}

Phases reconstruct_phases(double t, const InitialConditions& ic, const PhysicalParams& params) {
    const double phi = ic.phi0 + params.omega * t;
    return {phi, 0.5 * kPi - phi};
}

MeanFieldState reduced_to_meanfield(const ReducedState& state, const Phases& phases) {
    constexpr double r = 0.5;
    const double st = std::sin(state.theta);
    return {r * st * std::cos(phases.phi),
            r * st * std::sin(phases.phi),
            r * std::cos(state.theta),
            state.alpha * std::cos(phases.phi_alpha),
            state.alpha * std::sin(phases.phi_alpha),
            0.0};
}

ReducedState meanfield_to_reduced(const MeanFieldState& st) {
    return {std::atan2(std::sqrt(st.transverse_sq()), st.sz), std::hypot(st.x1, st.x2)};
}

MeanFieldState initial_meanfield(const InitialConditions& ic) {
    return reduced_to_meanfield({ic.theta0, ic.alpha0}, {ic.phi0, ic.phi_alpha0});
}

LienardTrajectory integrate_lienard(const ReducedState& y0, const PhysicalParams& params, double t0, double t1,
                                    const ode::Settings& settings) {
    auto rhs = [&params](double, const ode::Vec<2>& y) { return to_vec(lienard_rhs(from_vec(y), params)); };
    auto dense = ode::integrate_dopri5<2>(rhs, t0, t1, to_vec(y0), settings);
    TrajectoryMeta meta{"lienard", settings.tol, dense.step_count(), dense.rhs_evaluations(), params,
                        SzRate::Conserving};
    return {std::move(dense), std::move(meta)};
}

MeanFieldTrajectory integrate_meanfield(const MeanFieldState& y0, const PhysicalParams& params, double t0,
                                        double t1, const ode::Settings& settings, SzRate sz_rate) {
    auto rhs = [&params, sz_rate](double, const ode::Vec<6>& y) {
        return to_vec(full_rhs(from_vec(y), params, sz_rate));
    };
    auto dense = ode::integrate_dopri5<6>(rhs, t0, t1, to_vec(y0), settings);
    TrajectoryMeta meta{"meanfield", settings.tol, dense.step_count(), dense.rhs_evaluations(), params, sz_rate};
    return {std::move(dense), std::move(meta)};
}

std::vector<double> detect_extrema(const LienardTrajectory& traj) {
    const auto& params = traj.meta().params;
    auto g = [&](double t) {
        const ReducedState s = traj.at(t);
        return std::sin(s.theta) * lienard_rhs(s, params).theta;
    };
    const auto grid = ode::refined_grid(traj.dense(), 8);
    auto roots = ode::find_roots(g, grid);
    const double t0 = traj.t_begin(), t1 = traj.t_end();
    std::erase_if(roots, [&](double t) { return t <= t0 || t >= t1; });
    std::vector<double> kept;
    double last = std::cos(traj.at(t0).theta);
    for (double t : roots) {
        const double c = std::cos(traj.at(t).theta);
        if (std::abs(c - last) < kExtremumProminence) continue;
        kept.push_back(t);
        last = c;
    }
    return kept;
}

std::vector<Cycle> cycles_from_extrema(std::span<const double> extrema) {
    std::vector<Cycle> out;
    for (std::size_t i = 1; i < extrema.size(); ++i)
        out.push_back({i - 1, extrema[i - 1], extrema[i] - extrema[i - 1]});
    return out;
}

double bloch_radius_drift(const MeanFieldTrajectory& traj) {
    const auto& states = traj.dense().states();
    const double r0 = from_vec(states.front()).bloch_radius();
    double worst = 0.0;
    for (const auto& v : states) worst = std::max(worst, std::abs(from_vec(v).bloch_radius() / r0 - 1.0));
    return worst;
}

std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "uniform sampling needs at least 2 points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

} // namespace srsa
