#include "srsa/observables.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "srsa/error.hpp"

namespace srsa {

double total_intensity(const MeanFieldState& st, const PhysicalParams& params) {
    return params.n() * params.n() * params.gamma * params.omega0() * st.transverse_sq();
}

double relative_phase_sine(const MeanFieldState& st) {
    const std::complex<double> sigma{st.sx, -st.sy};
    const std::complex<double> a{st.x1, st.x2};
    if (std::abs(sigma) == 0.0 || std::abs(a) == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::sin(std::arg(sigma) - std::arg(a));
}

IntensitySample intensities(const MeanFieldState& st, const PhysicalParams& params, double t) {
    const double n = params.n();
    const double w0 = params.omega0();
    const double b = params.collective_coupling();
    // |σ₋||a| sin(φ_σ − φ_a) = Im(σ₋ a*) = −(s_x x₂ + s_y x₁)
    const double cross = -(st.sx * st.x2 + st.sy * st.x1);
    IntensitySample s;
    s.t = t;
    s.i_atom = n * w0 * (params.collective_decay() * st.transverse_sq() + 2.0 * b * cross);
    s.i_field = total_intensity(st, params) - s.i_atom;
    s.e_atom = w0 * st.sz;
    s.e_field = w0 * (st.x1 * st.x1 + st.x2 * st.x2);
    return s;
}

IntensitySample intensities(const ReducedState& state, const Phases& phases, const PhysicalParams& params,
                            double t) {
    return intensities(reduced_to_meanfield(state, phases), params, t);
}

std::vector<IntensitySample> intensity_series(const LienardTrajectory& traj, const InitialConditions& ic,
                                              std::span<const double> times) {
    const auto& params = traj.meta().params;
    std::vector<IntensitySample> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(intensities(traj.at(t), reconstruct_phases(t, ic, params), params, t));
    return out;
}

std::vector<IntensitySample> intensity_series(const MeanFieldTrajectory& traj, std::span<const double> times) {
    const auto& params = traj.meta().params;
    std::vector<IntensitySample> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(intensities(traj.at(t), params, t));
    return out;
}

SeriesSummary summarize(std::span<const IntensitySample> series, double negative_threshold,
                        std::span<const Cycle> cycles) {
    if (series.empty()) throw Error(ErrorCode::EmptySeries, "cannot summarize an empty intensity series");
    SeriesSummary out{};
    std::size_t imax = 0, imin = 0;
    bool in_negative = false;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].i_atom > series[imax].i_atom) imax = i;
        if (series[i].i_field < series[imin].i_field) imin = i;
        const bool neg = series[i].i_field < -negative_threshold;
        if (neg && !in_negative) ++out.n_negative_field_intervals;
        in_negative = neg;
    }
    out.peak_time = series[imax].t;
    out.peak_value = series[imax].i_atom;
    if (imax > 0 && imax + 1 < series.size()) {
        // vertex of the parabola through the three samples around the maximum
        const double x0 = series[imax - 1].t, x1 = series[imax].t, x2 = series[imax + 1].t;
        const double y0 = series[imax - 1].i_atom, y1 = series[imax].i_atom, y2 = series[imax + 1].i_atom;
        const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
        const double c2 = (d12 - d01) / (x2 - x0);
        if (c2 < 0) {
            const double c1 = d01 - c2 * (x0 + x1);
            const double xv = -c1 / (2 * c2);
            if (xv > x0 && xv < x2) {
                out.peak_time = xv;
                out.peak_value = y0 + d01 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
            }
        }
    }
    out.min_field = series[imin].i_field;
    out.min_field_time = series[imin].t;
    for (const auto& c : cycles) out.cycle_periods.push_back(c.period);
    return out;
}

} // namespace srsa
