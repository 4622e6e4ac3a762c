// params.hpp: unit system, physical constants, derived scales and regime classification.
//
// Frequencies are stored as multiples of the single-atom Rabi coupling g, so
// times are in units of 1/g. The coupling itself is kept as a field (g_rabi)
// so that the zero-coupling limit can be expressed.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srsa {

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalParams {
    double omega{1e5};          // mode frequency
    double g_rabi{1.0};         // single-atom Rabi coupling (unit)
    double gamma{5e-3};         // single-atom decay factor
    std::uint64_t n_atoms{1};
    std::optional<double> omega0_override; // atomic transition frequency, = omega on resonance

    // Throws Error(ValidationError) listing every violated invariant.
    static PhysicalParams create(double omega, double gamma, std::uint64_t n_atoms,
                                 double g_rabi = 1.0,
                                 std::optional<double> omega0 = std::nullopt);

    // Empty when all invariants hold.
    std::vector<std::string> violations() const;

    double omega0() const { return omega0_override.value_or(omega); }
    double n() const { return static_cast<double>(n_atoms); }
    double sqrt_n() const;
    double collective_coupling() const;  // √N g
    double collective_decay() const;     // N γ
    double emission_time() const;        // τ = 2/(Nγ)
    double damping() const;              // Nγ/4, decay rate of the underdamped envelope
    double epsilon() const;              // 4√N g/(Nγ)
};

enum class Regime { Overdamped, Damped, Underdamped };

struct RegimeInfo {
    Regime regime;
    double epsilon;
};

std::string_view to_string(Regime regime) noexcept;

inline constexpr double kOverdampedBelow = 0.3;
inline constexpr double kUnderdampedAbove = 3.0;

double coherence_parameter(const PhysicalParams& params);

// Overdamped if ε < 0.3, Underdamped if ε > 3, Damped otherwise.
RegimeInfo classify_regime(double epsilon);

struct CharacteristicTimes {
    double emission_time;  // τ = 2/(Nγ)
    double rabi_time;      // 1/(√N g)
};

CharacteristicTimes characteristic_times(const PhysicalParams& params);

// Separation-of-scales check behind the reduced dynamics: ω ≫ Nγ, √N g.
// "≫" is taken as a factor of 10.
inline constexpr double kScaleSeparation = 10.0;
std::vector<std::string> validity_warnings(const PhysicalParams& params);

struct InitialConditions {
    double theta0{kPi / 2};  // Bloch polar angle
    double phi0{kPi / 2};    // azimuth
    double alpha0{0.0};      // coherent amplitude modulus
    double phi_alpha0{0.0};  // field phase

    std::vector<std::string> violations() const;
    bool is_metastable() const { return theta0 == 0.0 && alpha0 == 0.0; }
};

} // namespace srsa
