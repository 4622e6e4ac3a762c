#include "doctest.h"

#include <string>

#include "srsa/config.hpp"
#include "srsa/error.hpp"

using namespace srsa;

namespace {

const char* kQuiet =
    "scenario=custom\n"
    "omega=1e5\n"
    "gamma=5e-3\n"
    "n_atoms=10000\n"
    "theta0=pi/2\n"
    "phi0=pi/2\n"
    "alpha0=0.01\n";

ErrorCode code_of(const std::string& text) {
    try {
        validate_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("config was accepted: " << text);
    return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
    try {
        validate_config(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

bool has_warning(const RunConfig& c, const std::string& fragment) {
    for (const auto& w : c.warnings)
        if (w.find(fragment) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("number syntax") {
    CHECK(parse_number("0.25") == 0.25);
    CHECK(parse_number(" 1e-3 ") == 1e-3);
    CHECK(parse_number("+2") == 2.0);
    CHECK(parse_number("pi") == kPi);
    CHECK(parse_number("pi/2") == kPi / 2);
    CHECK(parse_number("2*pi") == 2 * kPi);
    CHECK_THROWS_AS(parse_number("pi/0"), Error);
    CHECK_THROWS_AS(parse_number("1.0x"), Error);
    CHECK_THROWS_AS(parse_number(""), Error);
}

TEST_CASE("key=value lines") {
    const auto e = parse_entries("# comment\n\nscenario = fig4   # trailing\nsamples=501\n");
    REQUIRE(e.size() == 2);
    CHECK(e[0].key == "scenario");
    CHECK(e[0].value == "fig4");
    CHECK(e[0].line == 3);
    CHECK(e[1].line == 4);
    const auto c = build_config(e);
    CHECK(c.scenario == Scenario::Fig4);
    CHECK(c.samples == 501);
}

TEST_CASE("parse errors carry line and key") {
    CHECK(code_of("scenario=fig4\nomgea=3\n") == ErrorCode::ParseError);
    CHECK(message_of("scenario=fig4\nomgea=3\n").find("line 2") != std::string::npos);
    CHECK(message_of("scenario=fig4\nomgea=3\n").find("omgea") != std::string::npos);
    CHECK(code_of("scenario=fig4\nsamples\n") == ErrorCode::ParseError);
    CHECK(code_of("scenario=fig4\nscenario=fig2\n") == ErrorCode::ParseError);
    CHECK(code_of("scenario=fig9\n") == ErrorCode::ParseError);
    CHECK(code_of("scenario=fig4\nsamples=abc\n") == ErrorCode::ParseError);
    CHECK(message_of("scenario=fig4\nsamples=abc\n").find("samples") != std::string::npos);
    CHECK(code_of("scenario=fig4\nsamples=2.5\n") == ErrorCode::ParseError);
    CHECK(code_of("scenario=fig4\nformat=csv,pdf\n") == ErrorCode::ParseError);
    CHECK(code_of("{\"scenario\": \"fig4\", \"omgea\": 1}") == ErrorCode::ParseError);
    CHECK(code_of("{\"scenario\": ") == ErrorCode::ParseError);
    CHECK(code_of("[1, 2]") == ErrorCode::ParseError);
}

TEST_CASE("JSON and key=value give the same configuration") {
    const auto a = validate_config(
        "scenario=custom\nomega=1e5\ngamma=0.005\nn_atoms=1e4\ntheta0=pi/2\nphi0=pi/2\nalpha0=0.1\n"
        "deflection_times=0.01,0.02\nformat=csv,svg\n");
    const auto b = validate_config(
        R"({"scenario": "custom", "omega": 1e5, "gamma": 0.005, "n_atoms": 10000, "theta0": "pi/2",
            "phi0": "pi/2", "alpha0": 0.1, "deflection_times": [0.01, 0.02], "format": "csv,svg"})");
    CHECK(describe(a) == describe(b));
    CHECK(a.deflection_times.size() == 2);
    CHECK(b.formats.svg);
    CHECK_FALSE(b.formats.json);
}

TEST_CASE("fig3 preset") {
    const auto c = validate_config("scenario=fig3");
    CHECK(c.params.n_atoms == 1'000'000);
    CHECK(c.params.omega == 1e5);
    CHECK(c.params.gamma == 5e-3);
    CHECK(c.params.g_rabi == 1.0);
    CHECK(c.ic.theta0 == 2e-6);
    CHECK(c.ic.alpha0 == 0.1);
    CHECK(c.ic.phi0 == kPi / 2);
    CHECK(c.params.epsilon() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(c.coupling.mu_e == 1.0);
}

TEST_CASE("presets lock the physical keys") {
    CHECK(code_of("scenario=fig4\nn_atoms=100\n") == ErrorCode::ValidationError);
    CHECK(message_of("scenario=fig4\nn_atoms=100\n").find("n_atoms") != std::string::npos);
    // solver and output keys stay free
    const auto c = validate_config("scenario=fig5\nsigma=0.1\ntol_abs=1e-9\nsamples=11\nout=elsewhere\n");
    CHECK(c.sigma == 0.1);
    CHECK(c.tol.abs == 1e-9);
    CHECK(c.out_dir == "elsewhere");
}

TEST_CASE("custom needs every physical key") {
    CHECK(code_of("scenario=custom\nomega=1e5\n") == ErrorCode::ValidationError);
    const auto msg = message_of("scenario=custom\nomega=1e5\n");
    for (auto key : {"gamma", "n_atoms", "theta0", "phi0", "alpha0"}) CHECK(msg.find(key) != std::string::npos);
    CHECK_NOTHROW(validate_config(kQuiet));
}

TEST_CASE("validation lists every violation at once") {
    CHECK(code_of("scenario=fig4\ngamma=-1\n") == ErrorCode::ValidationError);
    const std::string text = std::string(kQuiet) + "sigma=-1\nsamples=1\ntol_rel=0\ngrid_n=5000\n";
    const auto msg = message_of(text);
    CHECK(msg.find("sigma") != std::string::npos);
    CHECK(msg.find("samples") != std::string::npos);
    CHECK(msg.find("tolerances") != std::string::npos);
    CHECK(msg.find("grid_n") != std::string::npos);
    const std::string bad_gamma = "scenario=custom\nomega=1e5\ngamma=-1\nn_atoms=100\ntheta0=1\nphi0=0\nalpha0=0.1\n";
    CHECK(code_of(bad_gamma) == ErrorCode::ValidationError);
    CHECK(message_of(bad_gamma).find("gamma must be > 0") != std::string::npos);
}

TEST_CASE("metastable start rejected") {
    const std::string text = "scenario=custom\nomega=1e5\ngamma=5e-3\nn_atoms=100\ntheta0=0\nphi0=0\nalpha0=0\n";
    CHECK(code_of(text) == ErrorCode::ValidationError);
    CHECK(message_of(text).find("metastable") != std::string::npos);
}

TEST_CASE("fig2 preset warns about the scale separation") {
    const auto c = validate_config("scenario=fig2");
    CHECK(has_warning(c, "N*gamma"));
}

TEST_CASE("each warning condition toggles independently") {
    const auto quiet = validate_config(kQuiet);
    CHECK(quiet.warnings.empty());

    struct Toggle {
        const char* key;
        const char* value;
        const char* fragment;
    };
    for (const Toggle& t : {Toggle{"omega", "500", "sqrt(N)*g"}, Toggle{"gamma", "2", "N*gamma"},
                            Toggle{"alpha0", "0.05", "alpha0*epsilon"}, Toggle{"theta0", "0.1", "R(t) < 1"},
                            Toggle{"sigma", "0.6", "k*sigma"}}) {
        CAPTURE(t.key);
        auto entries = parse_entries(kQuiet);
        set_entry(entries, t.key, t.value);
        const auto c = build_config(entries);
        CHECK(has_warning(c, t.fragment));
        CHECK(c.warnings.size() == 1);
    }
}

TEST_CASE("R(t) checked at the first deflection time") {
    auto entries = parse_entries(kQuiet);
    set_entry(entries, "theta0", "0.1");
    CHECK(has_warning(build_config(entries), "R(t) < 1"));
    set_entry(entries, "deflection_times", "0.1,0.05");  // R = 1.52·e^{-12.5·0.05} < 1
    CHECK_FALSE(has_warning(build_config(entries), "R(t) < 1"));
}

TEST_CASE("set_entry replaces or appends") {
    auto e = parse_entries("scenario=fig4\nsamples=10\n");
    set_entry(e, "samples", "20");
    set_entry(e, "out", "x");
    REQUIRE(e.size() == 3);
    CHECK(e[1].value == "20");
    CHECK(e[1].line == 0);
    CHECK(build_config(e).samples == 20);
}

TEST_CASE("key table") {
    CHECK(is_numeric_key("n_atoms"));
    CHECK(is_numeric_key("sigma"));
    CHECK(is_numeric_key("t_max"));
    CHECK_FALSE(is_numeric_key("scenario"));
    CHECK_FALSE(is_numeric_key("format"));
    CHECK(is_locked_key("theta0"));
    CHECK_FALSE(is_locked_key("sigma"));
    CHECK(config_keys().size() == 27);
}

TEST_CASE("missing config file") {
    try {
        load_config("/nonexistent/dir/run.cfg");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

}
