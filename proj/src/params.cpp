#include "srsa/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "srsa/error.hpp"

namespace srsa {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += "; ";
        out += item;
    }
    return out;
}

} // namespace

PhysicalParams PhysicalParams::create(double omega, double gamma, std::uint64_t n_atoms,
                                      double g_rabi, std::optional<double> omega0) {
    PhysicalParams p;
    p.omega = omega;
    p.gamma = gamma;
    p.n_atoms = n_atoms;
    p.g_rabi = g_rabi;
    p.omega0_override = omega0;
    if (auto v = p.violations(); !v.empty()) throw Error(ErrorCode::ValidationError, join(v));
    return p;
}

std::vector<std::string> PhysicalParams::violations() const {
    std::vector<std::string> out;
    if (!std::isfinite(omega) || omega <= 0) out.push_back(fmt::format("omega must be > 0 (got {})", omega));
    if (!std::isfinite(gamma) || gamma <= 0) out.push_back(fmt::format("gamma must be > 0 (got {})", gamma));
    if (!std::isfinite(g_rabi) || g_rabi < 0) out.push_back(fmt::format("g_rabi must be >= 0 (got {})", g_rabi));
    if (n_atoms < 1) out.push_back("n_atoms must be >= 1");
    if (omega0_override && (!std::isfinite(*omega0_override) || *omega0_override <= 0))
        out.push_back(fmt::format("omega0 must be > 0 (got {})", *omega0_override));
    return out;
}

double PhysicalParams::sqrt_n() const { return std::sqrt(n()); }
double PhysicalParams::collective_coupling() const { return sqrt_n() * g_rabi; }
double PhysicalParams::collective_decay() const { return n() * gamma; }
double PhysicalParams::emission_time() const { return 2.0 / collective_decay(); }
double PhysicalParams::damping() const { return collective_decay() / 4.0; }
double PhysicalParams::epsilon() const { return 4.0 * collective_coupling() / collective_decay(); }

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
    case Regime::Overdamped: return "overdamped";
    case Regime::Damped: return "damped";
    case Regime::Underdamped: return "underdamped";
    }
    return "unknown";
}

double coherence_parameter(const PhysicalParams& params) { return params.epsilon(); }

RegimeInfo classify_regime(double epsilon) {
    if (!std::isfinite(epsilon) || epsilon < 0)
        throw Error(ErrorCode::InvalidArgument, fmt::format("coherence parameter must be finite and >= 0 (got {})", epsilon));
    if (epsilon < kOverdampedBelow) return {Regime::Overdamped, epsilon};
    if (epsilon > kUnderdampedAbove) return {Regime::Underdamped, epsilon};
    return {Regime::Damped, epsilon};
}

CharacteristicTimes characteristic_times(const PhysicalParams& params) {
    return {params.emission_time(), 1.0 / params.collective_coupling()};
}

std::vector<std::string> validity_warnings(const PhysicalParams& params) {
    std::vector<std::string> out;
    const double w0 = params.omega0();
    if (w0 < kScaleSeparation * params.collective_decay())
        out.push_back(fmt::format("omega0 >> N*gamma violated: N*gamma = {:.6g} g, omega0 = {:.6g} g",
                                  params.collective_decay(), w0));
    if (w0 < kScaleSeparation * params.collective_coupling())
        out.push_back(fmt::format("omega0 >> sqrt(N)*g violated: sqrt(N)*g = {:.6g} g, omega0 = {:.6g} g",
                                  params.collective_coupling(), w0));
    return out;
}

std::vector<std::string> InitialConditions::violations() const {
    std::vector<std::string> out;
    if (!std::isfinite(theta0) || theta0 < 0 || theta0 > kPi)
        out.push_back(fmt::format("theta0 must lie in [0, pi] (got {})", theta0));
    if (!std::isfinite(alpha0) || alpha0 < 0)
        out.push_back(fmt::format("alpha0 must be >= 0 (got {})", alpha0));
    if (!std::isfinite(phi0)) out.push_back("phi0 must be finite");
    if (!std::isfinite(phi_alpha0)) out.push_back("phi_alpha0 must be finite");
    if (is_metastable())
        out.push_back("theta0 = 0 with alpha0 = 0 is the metastable fixed point (no dynamics)");
    return out;
}

} // namespace srsa
