#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <unistd.h>

#include <fmt/format.h>

#include "json.hpp"
#include "srsa/analytic.hpp"
#include "srsa/io.hpp"
#include "srsa/scenario.hpp"

using namespace srsa;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / fmt::format("srsa_test_{}_{}", name, ::getpid());
    fs::remove_all(p);
    return p;
}

RunConfig with(std::string text, const fs::path& out) {
    text += "\nout=" + out.string() + "\n";
    return validate_config(text);
}

bool leftovers(const fs::path& dir) {
    if (!fs::exists(dir)) return false;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().string().find(".partial") != std::string::npos) return true;
    return false;
}

const char* kCustom =
    "scenario=custom\nomega=1e5\ngamma=5e-3\nn_atoms=10000\ntheta0=0.3\nphi0=pi/2\nalpha0=0.05\nsamples=201\n";

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("CSV number format") {
    CHECK(csv_number(0.1) == "1.0000000000000001e-01");
    CHECK(csv_number(-2.0) == "-2.0000000000000000e+00");
    CHECK(csv_number(0.0) == "0.0000000000000000e+00");
    CHECK(csv_number(std::nan("")) == "nan");
}

TEST_CASE("default time windows") {
    const auto f2 = preset(Scenario::Fig2);
    const auto [t2, rule2] = default_t_max(f2);
    const double tau = f2.params.emission_time();
    CHECK(t2 == doctest::Approx(delay_time(f2.ic, f2.params).value + 6 * tau).epsilon(1e-14));
    CHECK(rule2 == "tau_d + 6 tau");
    const auto [t4, rule4] = default_t_max(preset(Scenario::Fig4));
    CHECK(t4 == doctest::Approx(0.12).epsilon(1e-14));
    const auto times = default_deflection_times(preset(Scenario::Fig5));
    REQUIRE(times.size() == 10);
    CHECK(times[4] * 100 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(default_deflection_times(preset(Scenario::Fig4)).empty());
    CHECK(default_deflection_times(preset(Scenario::Fig3)).size() == 1);
}

TEST_CASE("report rows are unique and carry provenance") {
    for (Scenario s : {Scenario::Fig2, Scenario::Fig3, Scenario::Fig4, Scenario::Fig5}) {
        CAPTURE(to_string(s));
        auto c = preset(s);
        c.samples = 401;
        const auto out = compute_scenario(c);
        std::set<std::string> seen;
        for (const auto& row : out.report.comparisons) {
            CHECK(seen.insert(row.quantity).second);
            CHECK_FALSE(row.provenance.empty());
            CHECK_FALSE(row.reference_text.empty());
            CHECK(std::isfinite(row.computed));
        }
        CHECK(seen.count("coherence parameter") == 1);
        std::set<std::string> names;
        for (const auto& [k, v] : out.report.derived) CHECK(names.insert(k).second);
        CHECK(out.report.value("comparison_rows") == doctest::Approx(out.report.comparisons.size()));
    }
}

TEST_CASE("every warning condition reaches the report") {
    struct Toggle {
        const char* line;
        const char* fragment;
    };
    for (const Toggle& t : {Toggle{"omega=500", "sqrt(N)*g"}, Toggle{"gamma=2", "N*gamma"},
                            Toggle{"alpha0=0.05", "alpha0*epsilon"}, Toggle{"theta0=0.1", "R(t) < 1"},
                            Toggle{"sigma=0.6", "k*sigma"}}) {
        CAPTURE(t.line);
        auto entries = parse_entries(
            "scenario=custom\nomega=1e5\ngamma=5e-3\nn_atoms=10000\ntheta0=pi/2\nphi0=pi/2\nalpha0=0.01\n"
            "samples=101\nt_max=0.02\n");
        const std::string line = t.line;
        set_entry(entries, line.substr(0, line.find('=')), line.substr(line.find('=') + 1));
        const auto report = compute_scenario(build_config(entries)).report;
        bool found = false;
        for (const auto& w : report.warnings) found = found || w.find(t.fragment) != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("identical configs give byte-identical artifacts") {
    const auto dir = scratch("determinism");
    auto a = with("scenario=fig4\nformat=csv,json,gnuplot,svg", dir / "a");
    auto b = with("scenario=fig4\nformat=csv,json,gnuplot,svg", dir / "b");
    const auto ra = run_scenario(a);
    run_scenario(b);
    REQUIRE(ra.artifacts.size() >= 8);
    for (const auto& name : ra.artifacts) {
        CAPTURE(name);
        CHECK(read_text(dir / "a" / name) == read_text(dir / "b" / name));
    }
    CHECK(read_text(dir / "a" / "trajectory.csv").starts_with("t,theta,alpha_mod,sx,sy,sz,x1,x2,R\n"));
    CHECK(read_text(dir / "a" / "intensities.csv").starts_with("t,i_atom,i_field,e_atom,e_field\n"));
    CHECK(read_text(dir / "a" / "trajectory_meanfield.csv").find(",,") == std::string::npos);
    const auto report = nlohmann::json::parse(read_text(dir / "a" / "report.json"));
    CHECK(report["scenario"] == "fig4");
    CHECK(report["comparisons"].size() == ra.comparisons.size());
    fs::remove_all(dir);
}

TEST_CASE("deflection artifacts") {
    const auto dir = scratch("fig5");
    const auto r = run_scenario(with("scenario=fig5\nsamples=201", dir));
    REQUIRE(r.deflection.size() == 10);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(read_text(dir / fmt::format("momentum_t{:02}.csv", i))
                  .starts_with("p_over_k,re_F_plus,im_F_plus,re_F_minus,im_F_minus,density_plus,density_minus\n"));
    const auto index = nlohmann::json::parse(read_text(dir / "momentum_index.json"));
    CHECK(index.size() == 10);
    CHECK(fs::exists(dir / "fig5_minus.gp"));
    for (const auto& d : r.deflection) {
        CHECK(d.parseval_error < 1e-10);
        CHECK(d.prob_plus > d.prob_minus);
        CHECK(d.resolved == (d.scaled_t >= 5.0));
    }
    CHECK(r.value("mu_e_ratio_for_50k") == doctest::Approx(50.0 / 6.0));
    fs::remove_all(dir);
}

TEST_CASE("failed runs leave nothing behind") {
    const auto dir = scratch("failure");
    // a step-size floor the integrator cannot meet
    const auto c = with(std::string(kCustom) + "tol_abs=1e-300\ntol_rel=1e-300\n", dir / "run");
    try {
        run_scenario(c);
        FAIL("expected a numerical failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("scenario custom") != std::string::npos);
    }
    CHECK_FALSE(fs::exists(dir / "run"));
    CHECK_FALSE(leftovers(dir));

    // unwritable target: a regular file stands where the parent should be
    fs::create_directories(dir);
    write_text(dir / "blocker", "x");
    try {
        run_scenario(with(kCustom, dir / "blocker" / "run"));
        FAIL("expected an I/O failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
    fs::remove_all(dir);
}

TEST_CASE("a rerun replaces the previous output") {
    const auto dir = scratch("rerun");
    run_scenario(with(std::string(kCustom) + "format=csv,json,svg", dir));
    CHECK(fs::exists(dir / "custom_theta.svg"));
    run_scenario(with(std::string(kCustom) + "format=csv", dir));
    CHECK_FALSE(fs::exists(dir / "custom_theta.svg"));
    CHECK_FALSE(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "trajectory.csv"));
    fs::remove_all(dir);
}

TEST_CASE("sweep isolates failing runs") {
    const auto dir = scratch("sweep");
    const auto tmpl = parse_entries("scenario=custom\nomega=1e5\ngamma=5e-3\nn_atoms=10000\ntheta0=0\nphi0=pi/2\n"
                                    "alpha0=0.1\nsamples=201\n");
    const std::vector<double> values = {0.0, 0.1};
    const auto res = sweep(tmpl, "alpha0", values, dir, 2);
    REQUIRE(res.runs.size() == 2);
    CHECK_FALSE(res.runs[0].report);
    CHECK(res.runs[0].error_code == ErrorCode::ValidationError);
    CHECK(res.runs[0].error.find("metastable") != std::string::npos);
    CHECK_FALSE(fs::exists(res.runs[0].dir));
    REQUIRE(res.runs[1].report);
    CHECK(fs::exists(res.runs[1].dir / "report.json"));
    CHECK_FALSE(leftovers(dir));

    // the surviving run matches the same config run alone
    auto solo = tmpl;
    set_entry(solo, "out", (dir / "solo").string());
    run_scenario(build_config(solo));
    CHECK(read_text(dir / "solo" / "trajectory.csv") == read_text(res.runs[1].dir / "trajectory.csv"));

    const auto csv = read_text(res.aggregate);
    CHECK(csv.starts_with("index,alpha0,status,"));
    CHECK(csv.find("failed") != std::string::npos);
    CHECK(csv.find(",ok,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep over the atom number reproduces the three regimes") {
    const auto dir = scratch("regimes");
    const auto tmpl = parse_entries("scenario=custom\nomega=1e5\ngamma=5e-3\nn_atoms=1\ntheta0=1e-3\nphi0=pi/2\n"
                                    "alpha0=0.1\nsamples=201\nformat=csv\n");
    const std::vector<double> values = {1e4, 1e6, 1e8};
    const auto res = sweep(tmpl, "n_atoms", values, dir, 3);
    const double expected[] = {8.0, 0.8, 0.08};
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(res.runs[i].report);
        CHECK(*res.runs[i].report->value("epsilon") == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    CHECK(res.runs[0].report->regime == "underdamped");
    CHECK(res.runs[1].report->regime == "damped");
    CHECK(res.runs[2].report->regime == "overdamped");
    fs::remove_all(dir);
}

TEST_CASE("sweep over sigma: momentum width scales as 1/sigma") {
    const auto dir = scratch("sigma");
    const auto tmpl = parse_entries("scenario=fig4\nsamples=101\nformat=csv\n");
    const std::vector<double> values = {0.1, 0.2, 0.4};
    const auto res = sweep(tmpl, "sigma", values, dir, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(res.runs[i].report);
        const double std_p = *res.runs[i].report->value("momentum_std_undeflected");
        CHECK(std_p * values[i] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    }
    fs::remove_all(dir);
}

TEST_CASE("sweep rejects a non-numeric axis") {
    const auto tmpl = parse_entries("scenario=fig4\n");
    const std::vector<double> values = {1.0};
    try {
        sweep(tmpl, "format", values, scratch("axis"), 1);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ValidationError);
    }
    CHECK(parse_values("1e4, 1e6,pi/2").size() == 3);
    CHECK_THROWS_AS(parse_values("1,,2"), Error);
}

}
