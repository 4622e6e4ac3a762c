#pragma once

#include "srsa/params.hpp"

namespace fixtures {

inline srsa::PhysicalParams params_n(std::uint64_t n, double omega = 1e5) {
    return srsa::PhysicalParams::create(omega, 5e-3, n);
}

inline srsa::InitialConditions ic_small_angle(std::uint64_t n) {
    return {2.0 / static_cast<double>(n), srsa::kPi / 2, 0.1, 0.0};
}

inline srsa::InitialConditions ic_equator() { return {srsa::kPi / 2, srsa::kPi / 2, 0.1, 0.0}; }

// Overdamped, damped and underdamped figure parameter sets.
inline srsa::PhysicalParams fig2_params() { return params_n(100'000'000); }
inline srsa::InitialConditions fig2_ic() { return ic_small_angle(100'000'000); }
inline srsa::PhysicalParams fig3_params() { return params_n(1'000'000); }
inline srsa::InitialConditions fig3_ic() { return ic_small_angle(1'000'000); }
inline srsa::PhysicalParams fig4_params() { return params_n(10'000); }
inline srsa::InitialConditions fig4_ic() { return ic_equator(); }

} // namespace fixtures
