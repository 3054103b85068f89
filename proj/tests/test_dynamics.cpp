#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftcons/dynamics.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ftcons;
using doctest::Approx;

TEST_CASE("sig_pow examples") {
    CHECK(sig_pow(0.25, 0.5) == Approx(0.5).epsilon(1e-15));
    CHECK(sig_pow(-2.0, 1.0) == -2.0);
    CHECK(sig_pow(-0.5, 0.8) == Approx(-std::exp(0.8 * std::log(0.5))).epsilon(1e-14));
    CHECK(sig_pow(-0.5, 0.8) == Approx(-0.574349).epsilon(1e-6));
    CHECK(sig_pow(0.0, 0.3) == 0.0);
}

TEST_CASE("exponent schedule") {
    CHECK(exponent_schedule(0.3, 0.8) == 0.8);
    CHECK(exponent_schedule(2.0, 0.8) == 1.0);
    CHECK(exponent_schedule(1.0, 0.8) == 1.0);
    CHECK(sig_pow(1.0, 0.8) == sig_pow(1.0, 1.0));
}

TEST_CASE("sig_pow is odd and nondecreasing") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<Real> x(-10.0, 10.0);
    std::uniform_real_distribution<Real> a(0.05, 1.0);
    for (int k = 0; k < 5000; ++k) {
        const Real v = x(rng);
        const Real w = x(rng);
        const Real al = a(rng);
        CHECK(sig_pow(-v, al) == -sig_pow(v, al));
        if (v <= w) {
            CHECK(sig_pow(v, al) <= sig_pow(w, al));
        }
    }
}

TEST_CASE("validation of controller specs") {
    ControllerSpec s;
    s.alpha_star = 1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.alpha_star = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.alpha_star = 0.5;
    s.beta = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.beta = 1.0;
    s.k = -0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    for (auto f : {ControllerFamily::VariableExponent, ControllerFamily::PureSig,
                   ControllerFamily::SignedAggregate, ControllerFamily::Combined,
                   ControllerFamily::Linear}) {
        CHECK(parse_controller_family(to_string(f)) == f);
    }
    CHECK_THROWS_AS(parse_controller_family("bogus"), std::invalid_argument);
}

namespace {

DirectedGraph mutual_pair() {
    DirectedGraph g(2);
    g.add_neighbor(0, 1).add_neighbor(1, 0);
    return g;
}

}  // namespace

TEST_CASE("variable-exponent control on a mutual pair") {
    ControllerSpec s;
    s.beta = 1.0;
    s.alpha_star = 0.8;
    auto far = control_input(s, mutual_pair(), Matrix::column({0.0, 2.0}), 0);
    CHECK(far[0] == 2.0);
    CHECK(control_input(s, mutual_pair(), Matrix::column({0.0, 2.0}), 1)[0] == -2.0);

    const Real near = std::pow(0.5, 0.8);
    CHECK(control_input(s, mutual_pair(), Matrix::column({0.0, 0.5}), 0)[0] ==
          Approx(near).epsilon(1e-14));
    CHECK(control_input(s, mutual_pair(), Matrix::column({0.0, 0.5}), 1)[0] ==
          Approx(-0.574349).epsilon(1e-6));
}

TEST_CASE("every family is silent at consensus") {
    const Matrix r = Matrix::from_rows({{0.3, -1.0}, {0.3, -1.0}, {0.3, -1.0}, {0.3, -1.0}});
    for (auto f : {ControllerFamily::VariableExponent, ControllerFamily::PureSig,
                   ControllerFamily::SignedAggregate, ControllerFamily::Combined,
                   ControllerFamily::Linear}) {
        ControllerSpec s;
        s.family = f;
        s.beta = 2.0;
        s.k = 3.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto u = control_input(s, fixtures::chain_to_back(), r, i);
            CHECK(u[0] == 0.0);
            CHECK(u[1] == 0.0);
        }
    }
}

TEST_CASE("family formulas against hand evaluation") {
    // Agent 0 listens to agents 1 (w = 2) and 2 (w = 1).
    DirectedGraph g(3);
    g.add_neighbor(0, 1, 2.0).add_neighbor(0, 2, 1.0);
    const Matrix r = Matrix::column({0.0, 0.3, -2.0});
    ControllerSpec s;
    s.beta = 1.5;
    s.k = 0.7;
    s.alpha_star = 0.6;

    s.family = ControllerFamily::VariableExponent;
    const Real ve = -1.5 * (2.0 * -std::pow(0.3, 0.6) + 1.0 * 2.0);
    CHECK(control_input(s, g, r, 0)[0] == Approx(ve).epsilon(1e-14));

    s.family = ControllerFamily::PureSig;
    const Real ps = -1.5 * (2.0 * -std::pow(0.3, 0.6) + std::pow(2.0, 0.6));
    CHECK(control_input(s, g, r, 0)[0] == Approx(ps).epsilon(1e-14));

    s.family = ControllerFamily::SignedAggregate;
    const Real agg = 2.0 * -0.3 + 1.0 * 2.0;  // 1.4
    CHECK(control_input(s, g, r, 0)[0] == Approx(-1.5 * std::pow(agg, 0.6)).epsilon(1e-14));

    s.family = ControllerFamily::Linear;
    CHECK(control_input(s, g, r, 0)[0] == Approx(-0.7 * agg).epsilon(1e-14));

    s.family = ControllerFamily::Combined;
    CHECK(control_input(s, g, r, 0)[0] == Approx(-0.7 * agg + ps).epsilon(1e-14));

    // Agents without neighbors get nothing.
    for (auto f : {ControllerFamily::VariableExponent, ControllerFamily::SignedAggregate,
                   ControllerFamily::Combined}) {
        s.family = f;
        CHECK(control_input(s, g, r, 1)[0] == 0.0);
    }
}

TEST_CASE("vector agents: exponent from the pair norm, sig per component") {
    DirectedGraph g(2);
    g.add_neighbor(0, 1);
    // Difference (0.6, 0.8) has unit norm, so the exponent is 1 even though
    // each component is below 1.
    const Matrix r = Matrix::from_rows({{0.6, 0.8}, {0.0, 0.0}});
    ControllerSpec s;
    s.beta = 1.0;
    s.alpha_star = 0.5;
    const auto u = control_input(s, g, r, 0);
    CHECK(u[0] == Approx(-0.6).epsilon(1e-15));
    CHECK(u[1] == Approx(-0.8).epsilon(1e-15));

    s.exponent_mode = ExponentMode::PerComponent;
    const auto v = control_input(s, g, r, 0);
    CHECK(v[0] == Approx(-std::sqrt(0.6)).epsilon(1e-14));
    CHECK(v[1] == Approx(-std::sqrt(0.8)).epsilon(1e-14));
}

TEST_CASE("closed-loop right-hand side") {
    ControllerSpec s;
    s.beta = 3.0;
    const auto zero = InherentDynamics::zero();
    const Matrix same = Matrix::column({1.0, 1.0, 1.0, 1.0});
    CHECK(closed_loop_rhs(s, zero, fixtures::chain_to_front(), 0.0, same) == Matrix(4, 1));

    const auto sine = InherentDynamics::sine();
    const Real h = std::numbers::pi / 2;
    const Matrix r0 = Matrix::column({h, -h, -h, -h});
    const Matrix d = closed_loop_rhs(s, sine, fixtures::chain_to_front(), 0.0, r0);
    CHECK(d(0, 0) == Approx(1.0 - 3.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(d(1, 0) == Approx(-1.0).epsilon(1e-15));
    CHECK(d(3, 0) == Approx(-1.0).epsilon(1e-15));

    const SwitchingSchedule single({{1.0, DirectedGraph(1)}}, true, 1.0, WeightBounds{});
    CHECK(closed_loop_rhs(s, sine, single.graph_at(0.0), 0.0, Matrix::column({0.5}))(0, 0) ==
          std::sin(0.5));
}

TEST_CASE("consensus absorption and the sign of the maximal agent's control") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<Real> x(-3.0, 3.0);
    ControllerSpec s;
    s.beta = 2.0;
    const auto sine = InherentDynamics::sine();
    for (int trial = 0; trial < 500; ++trial) {
        const Real c = x(rng);
        const Matrix same = Matrix::column({c, c, c, c});
        const Matrix d = closed_loop_rhs(s, sine, fixtures::chain_to_back(), 0.3, same);
        CHECK(d(0, 0) == d(1, 0));
        CHECK(d(1, 0) == d(3, 0));

        const Matrix r = Matrix::column({x(rng), x(rng), x(rng), x(rng)});
        std::size_t top = 0;
        for (std::size_t i = 1; i < 4; ++i) {
            if (r(i, 0) > r(top, 0)) {
                top = i;
            }
        }
        for (const auto& g : {fixtures::chain_to_back(), fixtures::chain_to_front()}) {
            CHECK(control_input(s, g, r, top)[0] <= 0.0);
        }
    }
}

TEST_CASE("inherent dynamics kinds") {
    CHECK(InherentDynamics::zero()(1.0, 5.0) == 0.0);
    CHECK(InherentDynamics::sine()(1.0, 0.5) == std::sin(0.5));
    CHECK(InherentDynamics::linear(2.0, 2.0)(0.0, 1.5) == 3.0);
    const auto c = InherentDynamics::custom([](Real t, Real v) { return t * v; }, 1.0, "tx");
    CHECK(c(2.0, 3.0) == 6.0);
    CHECK(c.kind() == DynamicsKind::Custom);
    CHECK(c.label() == "tx");
}
