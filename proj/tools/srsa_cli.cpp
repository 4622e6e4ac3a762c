// srsa: run the figure presets or custom configurations, sweep a key, or
// check a config file.
//
// Exit codes: 0 success, 2 validation, 3 numerical failure, 4 I/O failure.

#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "srsa/config.hpp"
#include "srsa/error.hpp"
#include "srsa/io.hpp"
#include "srsa/scenario.hpp"

namespace {

int exit_code(srsa::ErrorCode code) {
    switch (code) {
    case srsa::ErrorCode::ParseError:
    case srsa::ErrorCode::ValidationError: return 2;
    case srsa::ErrorCode::IoError: return 4;
    default: return 3;
    }
}

struct Common {
    std::string config;
    std::string scenario;
    std::string out;
    std::string format;
    std::string tol;
};

void add_common(CLI::App* app, Common& o) {
    app->add_option("--config", o.config, "config file (key=value lines or a JSON object)");
    app->add_option("--scenario", o.scenario, "preset name, used when no config file is given");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--format", o.format, "comma list of csv,json,gnuplot,svg");
    app->add_option("--tol", o.tol, "integrator tolerances ABS,REL");
}

std::vector<srsa::ConfigEntry> entries_from(const Common& o) {
    std::vector<srsa::ConfigEntry> entries;
    if (!o.config.empty()) entries = srsa::parse_entries(srsa::read_text(o.config));
    if (!o.scenario.empty()) srsa::set_entry(entries, "scenario", o.scenario);
    if (o.config.empty() && o.scenario.empty())
        throw srsa::Error(srsa::ErrorCode::ValidationError, "give --config or --scenario");
    if (!o.out.empty()) srsa::set_entry(entries, "out", o.out);
    if (!o.format.empty()) srsa::set_entry(entries, "format", o.format);
    if (!o.tol.empty()) {
        const auto comma = o.tol.find(',');
        if (comma == std::string::npos)
            throw srsa::Error(srsa::ErrorCode::ParseError, fmt::format("--tol expects ABS,REL, got '{}'", o.tol));
        srsa::set_entry(entries, "tol_abs", o.tol.substr(0, comma));
        srsa::set_entry(entries, "tol_rel", o.tol.substr(comma + 1));
    }
    return entries;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"superradiance-superabsorption scenarios and momentum distributions"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, validate_opts;
    auto* run = app.add_subcommand("run", "run one scenario and write its artifacts");
    add_common(run, run_opts);

    auto* sw = app.add_subcommand("sweep", "run a scenario over several values of one numeric key");
    add_common(sw, sweep_opts);
    std::string axis, values;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    sw->add_option("--axis", axis, "numeric config key")->required();
    sw->add_option("--values", values, "comma list of values")->required();
    sw->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);

    auto* val = app.add_subcommand("validate", "parse and validate a config, print warnings");
    add_common(val, validate_opts);

    auto* list = app.add_subcommand("list-scenarios", "list the presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (auto s : {srsa::Scenario::Fig2, srsa::Scenario::Fig3, srsa::Scenario::Fig4, srsa::Scenario::Fig5,
                           srsa::Scenario::Custom})
                fmt::print("{:<8} {}\n", srsa::to_string(s), srsa::scenario_summary(s));
            return 0;
        }
        if (*val) {
            const auto cfg = srsa::build_config(entries_from(validate_opts));
            fmt::print("{}", srsa::describe(cfg));
            print_warnings(cfg.warnings);
            return 0;
        }
        if (*run) {
            const auto cfg = srsa::build_config(entries_from(run_opts));
            const auto report = srsa::run_scenario(cfg);
            fmt::print("{}", srsa::report_text(report));
            fmt::print("artifacts written to {}\n", cfg.out_dir.string());
            return 0;
        }
        if (*sw) {
            auto entries = entries_from(sweep_opts);
            const auto cfg = srsa::build_config(entries);  // template must be valid on its own
            const auto result = srsa::sweep(entries, axis, srsa::parse_values(values), cfg.out_dir, workers);
            int failed = 0;
            for (const auto& r : result.runs) {
                if (r.report) {
                    fmt::print("{}={:<12g} ok      {}\n", axis, r.value, r.dir.string());
                } else {
                    ++failed;
                    fmt::print("{}={:<12g} failed  {}\n", axis, r.value, r.error);
                }
            }
            fmt::print("aggregate: {}\n", result.aggregate.string());
            if (failed > 0) fmt::print("{} of {} runs failed (see sweep.csv)\n", failed, result.runs.size());
            return 0;
        }
    } catch (const srsa::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_code(e.code());
    }
    return 0;
}
