// analytic.hpp: closed-form regime solutions, delay times and LR phases.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "srsa/dynamics.hpp"
#include "srsa/params.hpp"

namespace srsa {

// 2·atan(exp((t − τ_D)/τ)): rises from 0 to π, equals π/2 at τ_D.
double theta_h(double t, double tau_d, double tau);

// Which side of the pole the overdamped flow leaves from. For
// tan(θ₀/2) > α₀ε/2 the atoms go 0 → π (Direct); otherwise the field pushes
// θ negative first and the motion is the mirror image (θ, a) → (−θ, −a) of
// the Direct solution with α₀ → −α₀ (Reflected).
enum class Branch { Direct, Reflected };

inline double branch_sign(Branch b) { return b == Branch::Direct ? 1.0 : -1.0; }
std::string_view to_string(Branch b) noexcept;

Branch overdamped_branch(const InitialConditions& ic, const PhysicalParams& params);

struct DelayTime {
    double value;   // τ_D
    Branch branch;
};

// Root of e^x tan(θ₀/2) + sα₀ε(tan(θ₀/2) − sinh x)tanh x = 1 with x = τ_D/τ and
// s the branch sign, by bisection on x ∈ [0, ln cot(θ₀/2) + 50]. 0 at θ₀ = π/2.
DelayTime delay_time(const InitialConditions& ic, const PhysicalParams& params);

// τ·ln|(cot(θ₀/2) − α₀ε)/(1 − α₀(ε/2)cot(θ₀/2))|; DivergentLog when the
// argument is 0 or the denominator vanishes.
double delay_time_approx(const InitialConditions& ic, const PhysicalParams& params);

// α₀ε above this is outside the first-order expansion.
inline constexpr double kWeakCoherenceLimit = 0.1;
// delay_time_approx assumes θ₀ ≪ 1.
inline constexpr double kSmallThetaLimit = 0.1;

std::vector<std::string> overdamped_warnings(const InitialConditions& ic, const PhysicalParams& params);

struct OverdampedSolution {
    double tau_d;
    double tau;
    double theta0;
    double alpha0;
    double epsilon;
    Branch branch{Branch::Direct};

    static OverdampedSolution make(const InitialConditions& ic, const PhysicalParams& params);
};

// θ_h + sα₀ε cos θ_h with s the branch sign. On the Reflected branch this is
// the Bloch polar angle of the mirrored motion.
double overdamped_theta(double t, const OverdampedSolution& sol);

// |α₀ − s(ε/4)(θ_h − θ₀)|.
double overdamped_alpha(double t, const OverdampedSolution& sol);

struct UnderdampedSolution {
    double theta0;
    double alpha0;
    double omega_r;  // √N g
    double damping;  // Nγ/4
    double r0;       // √((θ₀−π)²/4 + α₀²)
    double phi_r;    // atan2(2α₀, π − θ₀)

    static UnderdampedSolution make(const InitialConditions& ic, const PhysicalParams& params);

    // R(t) = R₀ e^{−Nγt/4}
    double envelope(double t) const;
};

// π − [(π−θ₀)cos(√N g t) + 2α₀ sin(√N g t)] e^{−Nγt/4}
double underdamped_theta(double t, const UnderdampedSolution& sol);

// Analytic time derivative of underdamped_theta.
double underdamped_theta_rate(double t, const UnderdampedSolution& sol);

enum class AlphaMethod { Linearized, Quadrature };
std::string_view to_string(AlphaMethod m) noexcept;

// Signed amplitude a(t) = α₀ − (√N g/2)∫₀ᵗ sin θ dt'. Linearized replaces sin θ
// by π − θ and integrates in closed form; Quadrature integrates sin of the
// linearized θ numerically. |a| is the modulus.
double underdamped_alpha(double t, const UnderdampedSolution& sol, AlphaMethod method = AlphaMethod::Linearized);

struct LrPhaseSeries {
    std::vector<double> t;
    std::vector<double> phi_plus;   // Φ₊ᵃ
    std::vector<double> phi_minus;  // Φ₋ᵃ
    std::vector<double> phi_field;  // Φᶠ
};

// Trapezoid quadrature on the given sorted times (first entry is the lower
// limit). The reduced version rebuilds mean values with the rotating phases.
LrPhaseSeries lr_phases(const LienardTrajectory& traj, const InitialConditions& ic, std::span<const double> times);
LrPhaseSeries lr_phases(const MeanFieldTrajectory& traj, std::span<const double> times);

} // namespace srsa
