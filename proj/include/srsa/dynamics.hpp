// dynamics.hpp: full mean-field system and the reduced Liénard system.
//
// The Liénard pair (θ, a) is integrated with a signed amplitude: a < 0 is the
// same physical field as |a| with φ_α shifted by π. θ is never wrapped.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "srsa/ode.hpp"
#include "srsa/params.hpp"

namespace srsa {

struct ReducedState {
    double theta{0.0};
    double alpha{0.0};  // signed coherent amplitude

    // Polar angle folded into [0, π].
    double bloch_polar_angle() const { return std::acos(std::cos(theta)); }
    double alpha_mod() const { return std::abs(alpha); }
};

struct MeanFieldState {
    double sx{0.0}, sy{0.0}, sz{0.0};
    double x1{0.0}, x2{0.0};
    double chi{0.0};

    double transverse_sq() const { return sx * sx + sy * sy; }
    double bloch_radius() const { return std::sqrt(transverse_sq() + sz * sz); }
};

struct Phases {
    double phi;
    double phi_alpha;
};

// Rate of ⟨s_z⟩. Conserving uses 2Λ_I(s_x²+s_y²), which keeps the Bloch radius
// fixed and reproduces the Liénard system; NonConserving drops the factor 2.
enum class SzRate { Conserving, NonConserving };

inline constexpr double kDegenerateBlochFloor = 1e-30;

// Time derivative (dθ/dt, da/dt).
ReducedState lienard_rhs(const ReducedState& state, const PhysicalParams& params);

struct Amplification {
    double lambda_r;
    double lambda_i;
};

// Λ_R, Λ_I; throws DegenerateBloch when s_x²+s_y² < 1e-30.
Amplification nonlinear_amplification(const MeanFieldState& state, const PhysicalParams& params);

MeanFieldState full_rhs(const MeanFieldState& state, const PhysicalParams& params,
                        SzRate sz_rate = SzRate::Conserving);

// Rotating phase solution φ = φ₀ + ωt, φ_α = π/2 − φ.
Phases reconstruct_phases(double t, const InitialConditions& ic, const PhysicalParams& params);

// Bloch sphere of radius 1/2; chi is set to 0.
MeanFieldState reduced_to_meanfield(const ReducedState& state, const Phases& phases);

// θ ∈ [0, π] and a = |⟨a⟩| ≥ 0.
ReducedState meanfield_to_reduced(const MeanFieldState& state);

// Uses φ₀ and φ_α(0) from the initial conditions.
MeanFieldState initial_meanfield(const InitialConditions& ic);

struct TrajectoryMeta {
    std::string system;  // "lienard" or "meanfield"
    ode::Tolerance tol;
    std::size_t steps{0};
    std::size_t rhs_evaluations{0};
    PhysicalParams params;
    SzRate sz_rate{SzRate::Conserving};
};

inline ode::Vec<2> to_vec(const ReducedState& s) { return {s.theta, s.alpha}; }
inline ode::Vec<6> to_vec(const MeanFieldState& s) { return {s.sx, s.sy, s.sz, s.x1, s.x2, s.chi}; }
inline ReducedState from_vec(const ode::Vec<2>& v) { return {v[0], v[1]}; }
inline MeanFieldState from_vec(const ode::Vec<6>& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

template <class State, std::size_t D>
class Trajectory {
public:
    Trajectory(ode::DenseSolution<D> dense, TrajectoryMeta meta)
        : dense_(std::move(dense)), meta_(std::move(meta)) {}

    // Accepted step endpoints.
    const std::vector<double>& times() const { return dense_.times(); }
    std::vector<State> states() const {
        std::vector<State> out;
        out.reserve(dense_.states().size());
        for (const auto& v : dense_.states()) out.push_back(from_vec(v));
        return out;
    }
    double t_begin() const { return dense_.t_begin(); }
    double t_end() const { return dense_.t_end(); }

    // Dense-output evaluation, valid inside [t_begin, t_end].
    State at(double t) const { return from_vec(dense_(t)); }

    const TrajectoryMeta& meta() const { return meta_; }
    const ode::DenseSolution<D>& dense() const { return dense_; }

private:
    ode::DenseSolution<D> dense_;
    TrajectoryMeta meta_;
};

using LienardTrajectory = Trajectory<ReducedState, 2>;
using MeanFieldTrajectory = Trajectory<MeanFieldState, 6>;

LienardTrajectory integrate_lienard(const ReducedState& y0, const PhysicalParams& params, double t0, double t1,
                                    const ode::Settings& settings = {});

inline LienardTrajectory integrate_lienard(const InitialConditions& ic, const PhysicalParams& params, double t0,
                                           double t1, const ode::Settings& settings = {}) {
    return integrate_lienard(ReducedState{ic.theta0, ic.alpha0}, params, t0, t1, settings);
}

MeanFieldTrajectory integrate_meanfield(const MeanFieldState& y0, const PhysicalParams& params, double t0,
                                        double t1, const ode::Settings& settings = {},
                                        SzRate sz_rate = SzRate::Conserving);

// Extrema of the inversion cos θ: roots of sinθ·dθ/dt on the dense output,
// excluding the span endpoints. An extremum is dropped when cos θ moved by
// less than kExtremumProminence since the previous kept one (or the start),
// e.g. a pass over the pole right after a near-inverted start.
inline constexpr double kExtremumProminence = 1e-3;
std::vector<double> detect_extrema(const LienardTrajectory& traj);

struct Cycle {
    std::size_t index;
    double start;
    double period;
};

// One cycle between each pair of successive extrema.
std::vector<Cycle> cycles_from_extrema(std::span<const double> extrema);

inline std::vector<Cycle> detect_cycles(const LienardTrajectory& traj) {
    return cycles_from_extrema(detect_extrema(traj));
}

// max |R(t)/R(t₀) − 1| over accepted steps.
double bloch_radius_drift(const MeanFieldTrajectory& traj);

// n uniformly spaced times covering [t0, t1] inclusive.
std::vector<double> uniform_times(double t0, double t1, std::size_t n);

} // namespace srsa
