// scenario.hpp: scenario pipeline (integrate, analytic overlay, observables,
// deflection), run reports and parameter sweeps.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srsa/config.hpp"
#include "srsa/error.hpp"

namespace srsa {

// One row of the reference comparison table.
struct Comparison {
    std::string quantity;
    std::string reference_text;  // the reference statement
    std::optional<double> reference_value;
    double computed;
    std::string unit;
    std::string rule;           // agreement rule
    std::optional<bool> agree;  // empty when the row has no numeric rule
    bool asserted;              // false: reported only
    std::string provenance;
};

struct DeflectionSample {
    double t;
    double scaled_t;  // √N g t
    double r;         // envelope R(t), underdamped only
    double shift;     // √N μℰ k t, or k·κ(t) when overdamped
    double lobe_plus;
    double lobe_minus;
    bool resolved;    // lobes separated by at least 2/σ
    double prob_plus;
    double prob_minus;
    double parseval_error;  // |Σ(|F₊|²+|F₋|²)Δp − Σ|Θ|²Δx| / Σ|Θ|²Δx
    double bessel_l2;       // underdamped only
    double dp;
    std::string file;
};

struct RunReport {
    Scenario scenario{Scenario::Custom};
    std::string regime;
    std::string t_max_rule;
    std::vector<std::pair<std::string, double>> derived;  // insertion order is output order
    std::vector<std::string> warnings;
    std::vector<Comparison> comparisons;
    std::vector<DeflectionSample> deflection;
    std::vector<std::string> notes;
    std::vector<std::string> artifacts;

    std::optional<double> value(std::string_view name) const;
    const Comparison* comparison(std::string_view quantity) const;
};

struct Artifact {
    std::string name;
    std::string content;
};

struct ScenarioOutput {
    RunReport report;
    std::vector<Artifact> artifacts;
};

// Everything run_scenario writes, computed in memory. Module errors are
// rethrown with the scenario name prepended.
ScenarioOutput compute_scenario(const RunConfig& config);

// Writes the artifacts into config.out_dir through a staging directory;
// nothing is left behind on failure.
RunReport run_scenario(const RunConfig& config);

// Default time window and the rule that produced it.
std::pair<double, std::string> default_t_max(const RunConfig& config);
// Deflection times (1/g) used when the config leaves them empty.
std::vector<double> default_deflection_times(const RunConfig& config);

std::string report_json(const RunReport& report);
std::string report_text(const RunReport& report);

struct SweepRun {
    double value;
    std::filesystem::path dir;
    std::optional<RunReport> report;
    std::optional<ErrorCode> error_code;
    std::string error;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRun> runs;
    std::filesystem::path aggregate;
};

// Runs the template once per value of a numeric key, each in
// <out>/run_<index>, on up to `workers` threads. Failures are recorded per run.
SweepResult sweep(std::span<const ConfigEntry> template_entries, const std::string& axis,
                  std::span<const double> values, const std::filesystem::path& out, unsigned workers);

// Parses "v1,v2,..." with the config number syntax.
std::vector<double> parse_values(std::string_view text);

} // namespace srsa
