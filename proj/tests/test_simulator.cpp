#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftcons/analysis.hpp"
#include "ftcons/comparison.hpp"
#include "ftcons/comparison_system.hpp"
#include "ftcons/gains.hpp"
#include "ftcons/simulator.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace ftcons;
using doctest::Approx;

namespace {

const Real kHalfPi = std::numbers::pi / 2;

Matrix demo_r0() { return Matrix::column({kHalfPi, -kHalfPi, -kHalfPi, -kHalfPi}); }

ControllerSpec demo_spec() {
    ControllerSpec s;
    s.beta = 3.0;
    s.alpha_star = 0.8;
    return s;
}

}  // namespace

TEST_CASE("single steps") {
    const RightHandSide still = [](Real, const Matrix& r) { return Matrix(r.rows(), r.cols()); };
    const RightHandSide unit = [](Real, const Matrix& r) { return Matrix(r.rows(), r.cols(), 1.0); };
    const RightHandSide grow = [](Real, const Matrix& r) { return r; };

    const AgentState s{0.0, Matrix::column({0.3, -2.0})};
    CHECK(step(still, s, 0.1, Scheme::RK4).r == s.r);
    CHECK(step(still, s, 0.1, Scheme::Euler).r == s.r);
    CHECK(step(unit, AgentState{0.0, Matrix::column({0.0})}, 0.1, Scheme::Euler).r(0, 0) ==
          Approx(0.1).epsilon(1e-15));
    const auto e = step(grow, AgentState{0.0, Matrix::column({1.0})}, 0.1, Scheme::RK4);
    CHECK(std::abs(e.r(0, 0) - std::exp(0.1)) <= 1e-7);
    CHECK(e.t == Approx(0.1));
    CHECK_THROWS_AS(step(grow, s, 0.0, Scheme::RK4), std::invalid_argument);

    const RightHandSide blow = [](Real, const Matrix& r) {
        return Matrix(r.rows(), r.cols(), std::numeric_limits<Real>::infinity());
    };
    CHECK_THROWS_AS(step(blow, s, 0.1, Scheme::Euler), IntegrationError);
}

TEST_CASE("agents already at consensus stay together") {
    IntegratorConfig cfg;
    cfg.horizon = 3.0;
    const Trace tr = simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(),
                              Matrix::column({0.7, 0.7, 0.7, 0.7}), cfg);
    CHECK(tr.first_event(EventKind::ConsensusSnap) == std::optional<Real>(0.0));
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(tr.disagreement[k] == 0.0);
        const auto& r = tr.states[k];
        CHECK(r(0, 0) == r(3, 0));
    }
}

TEST_CASE("demo scenario settles within the horizon") {
    IntegratorConfig cfg;
    const Trace tr =
        simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(), demo_r0(), cfg);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 10.0);
    CHECK(tr.size() == 10001);
    const auto settle = settling_time(tr, 1e-3);
    REQUIRE(settle.has_value());
    CHECK(*settle < 10.0);
    CHECK(tr.disagreement.front() == Approx(std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("trace invariants: strictly increasing times, snap absorbs, switches on the grid") {
    IntegratorConfig cfg;
    cfg.dt = 3e-3;  // does not divide 0.5, so windows get shortened steps
    cfg.record_controls = true;
    const auto sched = fixtures::demo_schedule();
    const Trace tr = simulate(demo_spec(), InherentDynamics::sine(), sched, demo_r0(), cfg);
    for (std::size_t k = 1; k < tr.size(); ++k) {
        CHECK(tr.times[k] > tr.times[k - 1]);
        CHECK(tr.times[k] - tr.times[k - 1] <= cfg.dt * (1 + 1e-12));
        CHECK(tr.disagreement[k] >= 0.0);
    }
    CHECK(tr.controls.size() == tr.size());

    // Every schedule boundary is a sample time, so no step straddles one.
    const auto switches = tr.event_times(EventKind::Switch);
    CHECK(switches == sched.switch_times_in(0.0, cfg.horizon));
    for (Real s : switches) {
        CHECK(std::find(tr.times.begin(), tr.times.end(), s) != tr.times.end());
    }

    const auto snap = tr.first_event(EventKind::ConsensusSnap);
    REQUIRE(snap.has_value());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if (tr.times[k] >= *snap) {
            CHECK(tr.disagreement[k] == 0.0);
        }
    }
}

TEST_CASE("runs are bit-identical") {
    IntegratorConfig cfg;
    cfg.horizon = 4.0;
    const auto a =
        simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(), demo_r0(), cfg);
    const auto b =
        simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(), demo_r0(), cfg);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(a.disagreement == b.disagreement);
    CHECK(a.events == b.events);
}

TEST_CASE("halving dt shrinks the error by the scheme's order on a smooth window") {
    // [0, 0.3] lies inside the first segment and well before any gap closes.
    const auto error_at = [](Real dt, Scheme scheme) {
        IntegratorConfig cfg;
        cfg.horizon = 0.3;
        cfg.scheme = scheme;
        cfg.dt = 1e-5;
        const auto ref = simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(),
                                  demo_r0(), cfg);
        cfg.dt = dt;
        const auto run = simulate(demo_spec(), InherentDynamics::sine(), fixtures::demo_schedule(),
                                  demo_r0(), cfg);
        Real err = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            err = std::max(err, std::abs(run.states.back()(i, 0) - ref.states.back()(i, 0)));
        }
        return err;
    };
    const Real rk_ratio = error_at(1e-2, Scheme::RK4) / error_at(5e-3, Scheme::RK4);
    const Real eu_ratio = error_at(1e-2, Scheme::Euler) / error_at(5e-3, Scheme::Euler);
    CHECK(rk_ratio > 12.0);
    CHECK(rk_ratio < 20.0);
    CHECK(eu_ratio > 1.8);
    CHECK(eu_ratio < 2.2);
}

TEST_CASE("simulate rejects inconsistent input") {
    IntegratorConfig cfg;
    const auto sched = fixtures::demo_schedule();
    CHECK_THROWS_AS(simulate(demo_spec(), InherentDynamics::sine(), sched,
                             Matrix::column({0.0, 1.0, 2.0}), cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate(demo_spec(), InherentDynamics::sine(), sched,
                             Matrix::column({0.0, 1.0, 2.0, std::nan("")}), cfg),
                    std::invalid_argument);
    cfg.dt = 0.6;
    CHECK_THROWS_AS(simulate(demo_spec(), InherentDynamics::sine(), sched, demo_r0(), cfg),
                    std::invalid_argument);
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    IntegratorConfig ok;
    ok.horizon = 3.0;
    const SwitchingSchedule once({{1.0, fixtures::chain_to_front()}}, false, 1.0, WeightBounds{});
    CHECK_THROWS_AS(simulate(demo_spec(), InherentDynamics::sine(), once, demo_r0(), ok),
                    std::invalid_argument);
}

TEST_CASE("runaway drift is reported as an integration error") {
    IntegratorConfig cfg;
    cfg.horizon = 10.0;
    cfg.dt = 0.1;
    const SwitchingSchedule s({{1.0, DirectedGraph(2)}}, true, 1.0, WeightBounds{});
    CHECK_THROWS_AS(simulate(demo_spec(), InherentDynamics::linear(1000.0, 1000.0), s,
                             Matrix::column({1.0, 2.0}), cfg),
                    IntegrationError);
}

TEST_CASE("comparison right-hand side by hand") {
    ComparisonParams p{1.0, 3.0, 1.0, 0.8};
    const std::vector<Real> xi{0.0, 1.0};
    const auto below = comparison_rhs(ComparisonKind::MaxBelow, p, xi);
    CHECK(below[0] == 0.0);
    CHECK(below[1] == Approx(-2.0).epsilon(1e-15));
    const auto above = comparison_rhs(ComparisonKind::MinAbove, p, xi);
    CHECK(above[0] == Approx(3.0).epsilon(1e-15));
    CHECK(above[1] == Approx(1.0).epsilon(1e-15));

    // Gaps below one use alpha_star; order of input does not matter.
    const std::vector<Real> mixed{0.5, -0.2, 0.1};
    const auto d = comparison_rhs(ComparisonKind::MaxBelow, p, mixed);
    CHECK(d[1] == Approx(-0.2).epsilon(1e-15));
    CHECK(d[2] == Approx(0.1 - 3.0 * std::pow(0.3, 0.8)).epsilon(1e-14));
    CHECK(d[0] == Approx(0.5 - 3.0 * std::pow(0.4, 0.8)).epsilon(1e-14));

    const std::vector<Real> flat{0.4, 0.4, 0.4};
    for (auto kind : {ComparisonKind::MaxBelow, ComparisonKind::MinAbove}) {
        const auto f = comparison_rhs(kind, p, flat);
        CHECK(f[0] == Approx(0.4));
        CHECK(f[0] == f[1]);
        CHECK(f[1] == f[2]);
    }
}

TEST_CASE("coincident comparison states stay merged") {
    ComparisonParams p{0.5, 2.0, 1.0, 0.8};
    IntegratorConfig cfg;
    cfg.horizon = 2.0;
    const auto tr = simulate_comparison(p, std::vector<Real>{1.0, 1.0, 1.0}, cfg,
                                        ComparisonScript::fixed({{0.3, ComparisonKind::MaxBelow},
                                                                 {0.3, ComparisonKind::MinAbove}},
                                                                true));
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(tr.disagreement[k] == 0.0);
    }
    CHECK(tr.states.back()(0, 0) == Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("comparison systems preserve order and record merges") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<Real> u(-2.0, 2.0);
    std::uniform_real_distribution<Real> dur(0.05, 0.6);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Real> xi0(5);
        for (Real& v : xi0) {
            v = u(rng);
        }
        std::vector<ComparisonSegment> script;
        for (int k = 0; k < 6; ++k) {
            script.push_back({dur(rng), k % 2 ? ComparisonKind::MinAbove : ComparisonKind::MaxBelow});
        }
        const ComparisonParams p{0.5, 0.5 / chain_constant(4) + 1.0, 1.0, 0.7};
        IntegratorConfig cfg;
        cfg.horizon = 8.0;
        cfg.dt = 2e-3;
        const auto tr = simulate_comparison(p, xi0, cfg, ComparisonScript::fixed(script, true));
        for (std::size_t k = 0; k < tr.size(); ++k) {
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t j = 0; j < 5; ++j) {
                    if (xi0[i] <= xi0[j]) {
                        REQUIRE(tr.states[k](i, 0) <= tr.states[k](j, 0) + 1e-8);
                    }
                }
            }
        }
        CHECK(tr.event_times(EventKind::Merge).size() >= 1);
        CHECK(tr.disagreement.back() == 0.0);
    }
}

TEST_CASE("three-state comparison chain contracts under the gain condition") {
    const Real q = chain_constant(2);
    const ComparisonParams p{1.0, 1.0 / q + 0.5, 1.0, 0.8};
    IntegratorConfig cfg;
    cfg.horizon = 12.0;
    const auto tr = simulate_comparison(p, std::vector<Real>{0.0, 1.0, 2.0}, cfg,
                                        ComparisonScript::fixed({{0.25, ComparisonKind::MaxBelow},
                                                                 {0.25, ComparisonKind::MinAbove}},
                                                                true));
    const auto gt = g_tilde_series(tr, p.alpha_star);
    for (std::size_t k = 1; k < tr.size(); ++k) {
        CHECK(gt[k] <= gt[k - 1] + 1e-8);
        if (tr.disagreement[k - 1] > 0.0) {
            CHECK(tr.disagreement[k] < tr.disagreement[k - 1]);
        }
    }
    CHECK(tr.disagreement.back() == 0.0);
}
