// config.hpp: run configuration: flat key=value or JSON text, scenario
// presets and eager validity warnings.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srsa/analytic.hpp"
#include "srsa/bessel.hpp"
#include "srsa/deflection.hpp"
#include "srsa/ode.hpp"
#include "srsa/params.hpp"

namespace srsa {

enum class Scenario { Fig2, Fig3, Fig4, Fig5, Custom };
std::string_view to_string(Scenario s) noexcept;
std::optional<Scenario> scenario_from_string(std::string_view name);
std::string_view scenario_summary(Scenario s) noexcept;

// Uniform resampling on `samples` points, or one row per accepted step.
enum class SampleMode { Uniform, Steps };

struct OutputFormats {
    bool csv{true};
    bool json{true};
    bool gnuplot{true};
    bool svg{false};
};

// One key=value pair; line 0 means it came from the command line or a sweep.
struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line{0};
};

struct RunConfig {
    Scenario scenario{Scenario::Custom};
    PhysicalParams params;
    InitialConditions ic;

    double sigma{0.2};  // 1/k
    Normalization normalization{Normalization::UnitL2};
    std::optional<double> half_width;  // 1/k; automatic when unset
    std::optional<std::size_t> grid_n;
    CouplingModel coupling;

    ode::Tolerance tol;
    std::size_t samples{2001};
    SampleMode sample_mode{SampleMode::Uniform};
    std::optional<double> t_max;          // 1/g; scenario rule when unset
    std::vector<double> deflection_times;  // 1/g; scenario default when empty
    double meanfield_omega{1e3};
    AlphaMethod alpha_method{AlphaMethod::Linearized};
    BesselForm bessel_form{BesselForm::Polynomial};

    std::filesystem::path out_dir{"out"};
    OutputFormats formats;

    std::vector<ConfigEntry> entries;  // the source, kept for sweeps
    std::vector<std::string> warnings;
};

// Keys accepted in a config, in canonical order.
std::span<const std::string_view> config_keys();
bool is_numeric_key(std::string_view key);
// Physics keys fixed by the figure presets.
bool is_locked_key(std::string_view key);

// Decimal number, `pi`, `pi/x` or `x*pi`.
double parse_number(std::string_view text);

// Parses the raw text. A text whose first non-blank character is '{' is read
// as a JSON object; otherwise as key=value lines with '#' comments.
// Throws ParseError on malformed lines, unknown or duplicated keys.
std::vector<ConfigEntry> parse_entries(std::string_view text);

// Replaces the value of `key` or appends it.
void set_entry(std::vector<ConfigEntry>& entries, std::string_view key, std::string value);

// Throws ParseError for values that are not of the key's type and
// ValidationError listing every violated constraint.
RunConfig build_config(std::span<const ConfigEntry> entries);

inline RunConfig validate_config(std::string_view text) { return build_config(parse_entries(text)); }

// Reads and validates a config file; IoError when unreadable.
RunConfig load_config(const std::filesystem::path& path);

RunConfig preset(Scenario s);

// The four validity conditions: ω ≫ Nγ, √N g; α₀ε ≪ 1; R₀ < 1; kσ ≪ 1.
std::vector<std::string> config_warnings(const RunConfig& config);

// Normalized key=value listing of the effective configuration.
std::string describe(const RunConfig& config);

} // namespace srsa
