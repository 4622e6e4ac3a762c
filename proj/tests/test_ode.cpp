#include "doctest.h"

#include <cmath>
#include <string>

#include "srsa/error.hpp"
#include "srsa/ode.hpp"
#include "srsa/params.hpp"

using namespace srsa;

TEST_SUITE("ode") {

TEST_CASE("exponential decay with dense output") {
    auto rhs = [](double, const ode::Vec<1>& y) { return ode::Vec<1>{-y[0]}; };
    const auto sol = ode::integrate_dopri5<1>(rhs, 0.0, 5.0, {1.0}, {});
    CHECK(sol.states().back()[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
    for (double t = 0.0; t <= 5.0; t += 0.0137) {
        CHECK(std::abs(sol(t)[0] - std::exp(-t)) < 1e-9);
        CHECK(std::abs(sol.derivative(t)[0] + std::exp(-t)) < 1e-7);
    }
    CHECK(sol.times().front() == 0.0);
    CHECK(sol.times().back() == 5.0);
}

TEST_CASE("harmonic oscillator over many periods") {
    auto rhs = [](double, const ode::Vec<2>& y) { return ode::Vec<2>{y[1], -y[0]}; };
    const auto sol = ode::integrate_dopri5<2>(rhs, 0.0, 20 * kPi, {1.0, 0.0}, {});
    for (double t = 0.0; t < 20 * kPi; t += 0.31) {
        const auto y = sol(t);
        CHECK(std::abs(y[0] - std::cos(t)) < 1e-8);
        CHECK(std::abs(y[1] + std::sin(t)) < 1e-8);
    }
}

TEST_CASE("times strictly increasing and deterministic") {
    auto rhs = [](double t, const ode::Vec<1>& y) { return ode::Vec<1>{std::sin(t) * y[0]}; };
    const auto a = ode::integrate_dopri5<1>(rhs, 0.0, 10.0, {1.0}, {});
    const auto b = ode::integrate_dopri5<1>(rhs, 0.0, 10.0, {1.0}, {});
    REQUIRE(a.times().size() == b.times().size());
    for (std::size_t i = 1; i < a.times().size(); ++i) {
        CHECK(a.times()[i] > a.times()[i - 1]);
        CHECK(a.times()[i] == b.times()[i]);
        CHECK(a.states()[i][0] == b.states()[i][0]);
    }
}

TEST_CASE("blow-up is reported as a numerical failure") {
    auto rhs = [](double, const ode::Vec<1>& y) { return ode::Vec<1>{y[0] * y[0]}; };
    try {
        ode::integrate_dopri5<1>(rhs, 0.0, 2.0, {1.0}, {});
        FAIL("expected a numerical failure");
    } catch (const Error& e) {
        const bool expected = e.code() == ErrorCode::StepSizeUnderflow || e.code() == ErrorCode::NonFiniteState;
        CHECK(expected);
    }
}

TEST_CASE("argument validation") {
    auto rhs = [](double, const ode::Vec<1>& y) { return y; };
    CHECK_THROWS_AS(ode::integrate_dopri5<1>(rhs, 1.0, 1.0, {1.0}, {}), Error);
    CHECK_THROWS_AS(ode::integrate_dopri5<1>(rhs, 0.0, 1.0, {std::nan("")}, {}), Error);
    ode::Settings bad;
    bad.tol.abs = 0.0;
    CHECK_THROWS_AS(ode::integrate_dopri5<1>(rhs, 0.0, 1.0, {1.0}, bad), Error);
    const auto sol = ode::integrate_dopri5<1>(rhs, 0.0, 1.0, {1.0}, {});
    CHECK_THROWS_AS(sol(1.5), Error);
}

TEST_CASE("right-hand-side errors carry the failure time") {
    auto rhs = [](double t, const ode::Vec<1>& y) {
        if (t > 0.5) throw Error(ErrorCode::DegenerateBloch, "test");
        return y;
    };
    try {
        ode::integrate_dopri5<1>(rhs, 0.0, 1.0, {1.0}, {});
        FAIL("expected DegenerateBloch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateBloch);
        CHECK(std::string(e.what()).find("at t =") != std::string::npos);
    }
}

TEST_CASE("root finding on a grid") {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.1 * i);
    const auto roots = ode::find_roots([](double t) { return std::sin(t); }, grid);
    REQUIRE(roots.size() == 4);  // 0, π, 2π, 3π
    CHECK(roots[0] == 0.0);
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(roots[static_cast<std::size_t>(k)] - k * kPi) < 1e-11);
    CHECK(ode::find_roots([](double t) { return std::exp(-t); }, grid).empty());
}

}
