#include "srsa/analytic.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

double theta_h(double t, double tau_d, double tau) {
    if (!(tau > 0)) throw Error(ErrorCode::InvalidArgument, fmt::format("tau must be > 0 (got {})", tau));
    return 2.0 * std::atan(std::exp((t - tau_d) / tau));
}

std::string_view to_string(Branch b) noexcept { return b == Branch::Direct ? "direct" : "reflected"; }

std::string_view to_string(AlphaMethod m) noexcept {
    return m == AlphaMethod::Linearized ? "linearized" : "quadrature";
}

Branch overdamped_branch(const InitialConditions& ic, const PhysicalParams& params) {
    return std::tan(0.5 * ic.theta0) > 0.5 * ic.alpha0 * params.epsilon() ? Branch::Direct : Branch::Reflected;
}

DelayTime delay_time(const InitialConditions& ic, const PhysicalParams& params) {
    const Branch branch = overdamped_branch(ic, params);
    if (!(ic.theta0 > 0) || !(ic.theta0 <= kPi))
        throw Error(ErrorCode::InvalidArgument, fmt::format("delay time needs theta0 in (0, pi/2] (got {})", ic.theta0));
    if (std::abs(ic.theta0 - 0.5 * kPi) <= 4 * std::numeric_limits<double>::epsilon()) return {0.0, branch};

    const double tau = params.emission_time();
    const double tn = std::tan(0.5 * ic.theta0);
    const double coef = branch_sign(branch) * ic.alpha0 * params.epsilon();
    auto f = [&](double x) { return std::exp(x) * tn + coef * (tn - std::sinh(x)) * std::tanh(x) - 1.0; };

    double lo = 0.0;
    double hi = std::log(1.0 / tn) + 50.0;
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (!(f_lo < 0 && f_hi > 0))
        throw Error(ErrorCode::NoRootInBracket,
                    fmt::format("delay-time equation has no sign change on x = t/tau in [{}, {:.6g}] "
                                "(f = {:.6g}, {:.6g})",
                                lo, hi, f_lo, f_hi));
    for (int it = 0; it < 400 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0) lo = mid; else hi = mid;
    }
    return {0.5 * (lo + hi) * tau, branch};
}

double delay_time_approx(const InitialConditions& ic, const PhysicalParams& params) {
    const double eps = params.epsilon();
    const double cot = 1.0 / std::tan(0.5 * ic.theta0);
    const double num = cot - ic.alpha0 * eps;
    const double den = 1.0 - 0.5 * ic.alpha0 * eps * cot;
    if (den == 0.0 || num == 0.0 || !std::isfinite(num / den))
        throw Error(ErrorCode::DivergentLog,
                    fmt::format("log argument ({:.6g})/({:.6g}) is singular", num, den));
    return params.emission_time() * std::log(std::abs(num / den));
}

std::vector<std::string> overdamped_warnings(const InitialConditions& ic, const PhysicalParams& params) {
    std::vector<std::string> out;
    const double ae = ic.alpha0 * params.epsilon();
    if (ae > kWeakCoherenceLimit)
        out.push_back(fmt::format("alpha0*epsilon << 1 violated: alpha0*epsilon = {:.6g}", ae));
    if (ic.theta0 > kSmallThetaLimit)
        out.push_back(fmt::format("small-angle delay-time estimate used with theta0 = {:.6g} > {}", ic.theta0,
                                  kSmallThetaLimit));
    return out;
}

OverdampedSolution OverdampedSolution::make(const InitialConditions& ic, const PhysicalParams& params) {
    const DelayTime d = delay_time(ic, params);
    return {d.value, params.emission_time(), ic.theta0, ic.alpha0, params.epsilon(), d.branch};
}

double overdamped_theta(double t, const OverdampedSolution& sol) {
    const double th = theta_h(t, sol.tau_d, sol.tau);
    return th + branch_sign(sol.branch) * sol.alpha0 * sol.epsilon * std::cos(th);
}

double overdamped_alpha(double t, const OverdampedSolution& sol) {
    const double th = theta_h(t, sol.tau_d, sol.tau);
    return std::abs(sol.alpha0 - branch_sign(sol.branch) * 0.25 * sol.epsilon * (th - sol.theta0));
}

UnderdampedSolution UnderdampedSolution::make(const InitialConditions& ic, const PhysicalParams& params) {
    const double a = kPi - ic.theta0;
    return {ic.theta0,
            ic.alpha0,
            params.collective_coupling(),
            params.damping(),
            std::sqrt(0.25 * a * a + ic.alpha0 * ic.alpha0),
            std::atan2(2.0 * ic.alpha0, a)};
}

double UnderdampedSolution::envelope(double t) const { return r0 * std::exp(-damping * t); }

double underdamped_theta(double t, const UnderdampedSolution& sol) {
    const double bt = sol.omega_r * t;
    return kPi - ((kPi - sol.theta0) * std::cos(bt) + 2.0 * sol.alpha0 * std::sin(bt)) * std::exp(-sol.damping * t);
}

double underdamped_theta_rate(double t, const UnderdampedSolution& sol) {
    const double b = sol.omega_r, d = sol.damping;
    const double A = kPi - sol.theta0, B = 2.0 * sol.alpha0;
    const double c = std::cos(b * t), s = std::sin(b * t);
    return -(b * (B * c - A * s) - d * (A * c + B * s)) * std::exp(-d * t);
}

double underdamped_alpha(double t, const UnderdampedSolution& sol, AlphaMethod method) {
    const double b = sol.omega_r;
    if (t == 0.0 || b == 0.0) return sol.alpha0;
    if (method == AlphaMethod::Quadrature) {
        auto integrand = [&sol](double s) { return std::sin(underdamped_theta(s, sol)); };
        const double integral =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, t, 12, 1e-11);
        return sol.alpha0 - 0.5 * b * integral;
    }
    const double d = sol.damping;
    const double D = d * d + b * b;
    const double A = kPi - sol.theta0, B = 2.0 * sol.alpha0;
    auto ic = [&](double s) { return std::exp(-d * s) * (-d * std::cos(b * s) + b * std::sin(b * s)) / D; };
    auto is = [&](double s) { return std::exp(-d * s) * (-d * std::sin(b * s) - b * std::cos(b * s)) / D; };
    return sol.alpha0 - 0.5 * b * (A * (ic(t) - ic(0.0)) + B * (is(t) - is(0.0)));
}

namespace {

struct LrIntegrands {
    double plus, minus, field;
};

LrIntegrands lr_integrands(const MeanFieldState& st, const PhysicalParams& params) {
    const auto [lr, li] = nonlinear_amplification(st, params);
    (void)li;
    const double r = st.bloch_radius();
    const double c = st.sz / r;  // cos θ
    const double sin2 = 0.5 * (1.0 - c), cos2 = 0.5 * (1.0 + c);
    const double b = params.collective_coupling();
    const double field = params.omega * (st.x1 * st.x1 + st.x2 * st.x2) - b * (st.sx * st.x1 - st.sy * st.x2);
    return {-lr * sin2, lr * cos2, field};
}

template <class StateAt>
LrPhaseSeries integrate_lr(StateAt&& state_at, const PhysicalParams& params, std::span<const double> times) {
    LrPhaseSeries out;
    if (times.empty()) return out;
    const double t0 = times.front();
    double ip = 0, im = 0, ifl = 0;
    LrIntegrands prev = lr_integrands(state_at(t0), params);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (i > 0) {
            const LrIntegrands cur = lr_integrands(state_at(t), params);
            const double h = 0.5 * (t - times[i - 1]);
            ip += h * (prev.plus + cur.plus);
            im += h * (prev.minus + cur.minus);
            ifl += h * (prev.field + cur.field);
            prev = cur;
        }
        const double rot = -0.5 * params.omega * (t - t0);
        out.t.push_back(t);
        out.phi_plus.push_back(rot + ip);
        out.phi_minus.push_back(rot + im);
        out.phi_field.push_back(ifl);
    }
    return out;
}

} // namespace

LrPhaseSeries lr_phases(const LienardTrajectory& traj, const InitialConditions& ic, std::span<const double> times) {
    const auto& params = traj.meta().params;
    return integrate_lr(
        [&](double t) { return reduced_to_meanfield(traj.at(t), reconstruct_phases(t, ic, params)); }, params, times);
}

LrPhaseSeries lr_phases(const MeanFieldTrajectory& traj, std::span<const double> times) {
    return integrate_lr([&](double t) { return traj.at(t); }, traj.meta().params, times);
}

} // namespace srsa
