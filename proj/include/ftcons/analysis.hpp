#pragma once

#include "ftcons/dynamics.hpp"
#include "ftcons/graph.hpp"
#include "ftcons/simulator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ftcons {

/// Per-component max_i r_i - min_i r_i.
std::vector<Real> disagreement(const Matrix& r);
/// Largest component of disagreement(r); the trace's G column.
Real max_disagreement(const Matrix& r);
/// Componentwise log(1 + disagreement).
std::vector<Real> log_disagreement(const Matrix& r);

/// Smallest recorded t after which G stays at or below tol up to the end of
/// the trace. Throws std::invalid_argument unless tol > 0.
std::optional<Real> settling_time(const Trace& trace, Real tol);

/// First run of consecutive samples over which G strictly increases by more
/// than min_rise in total, as (start time, end time).
std::optional<std::pair<Real, Real>> increasing_interval(const Trace& trace, Real min_rise = 0.0);

struct LipschitzReport {
    Real gamma = 0.0;
    Real max_ratio = 0.0;
    Real worst_a = 0.0;
    Real worst_b = 0.0;
    Real worst_t = 0.0;
    std::size_t pairs = 0;
    bool pass = false;
};

/// Largest |phi(t, a) - phi(t, b)| / |a - b| over low-discrepancy pairs
/// (a, b) in [lo, hi] and t on a uniform grid of [0, t_max]. The seed shifts
/// the sequence. A pass is evidence only; a failure is a certificate.
LipschitzReport lipschitz_audit(const InherentDynamics& dyn, Real lo, Real hi, std::size_t samples,
                                std::uint64_t seed = 0, Real t_max = 10.0);

/// has_directed_spanning_tree for every segment, in schedule order.
std::vector<bool> spanning_tree_audit(const SwitchingSchedule& schedule);

struct ConvergenceReport {
    Real horizon = 0.0;
    Real settling_tol = 0.0;
    std::optional<Real> settling_time;
    Real final_g = 0.0;
    bool g_monotone = false;
    std::optional<std::pair<Real, Real>> first_increase;
    std::optional<Real> snap_time;
    /// Max of G over each window between consecutive switches.
    std::vector<Real> window_max_g;
    std::optional<Real> analytic_bound;
    std::vector<bool> per_segment_spanning_tree;
};

ConvergenceReport summarize(const Trace& trace, const SwitchingSchedule& schedule, Real settling_tol,
                            std::optional<Real> analytic_bound = std::nullopt);

/// key = value text.
std::string format_report(const ConvergenceReport& report);

/// Time for the gap d0 of a single directed pair under the pure-sig law to
/// close when only the follower moves: d0^(1 - a) / (eps (1 - a)).
Real one_sided_extinction_time(Real d0, Real epsilon, Real alpha_star);

/// First time at which the RK4-integrated one-sided gap falls to meet_tol,
/// located by bisection over the integration horizon. The tolerance is tiny
/// because a gap g still needs g^(1 - a) / (eps (1 - a)) to close; 1e-12
/// would leave about 0.02 s at a = 0.8.
Real simulated_meeting_time(Real d0, Real epsilon, Real alpha_star, Real meet_tol = 1e-60,
                            Real dt = 1e-4);

/// Three agents starting at 0, 1, 2 with no drift under the pure-sig law,
/// driven by single-edge graphs whose union over one cycle is a directed
/// ring. Each segment lasts exactly until the moving agent catches its
/// neighbor, so max and min never move.
struct CounterexampleScenario {
    SwitchingSchedule schedule;
    Matrix r0;
    ControllerSpec spec;
    InherentDynamics dynamics;
    /// The graphs of one full cycle.
    std::vector<DirectedGraph> cycle;
    std::size_t cycles;
};

CounterexampleScenario ring_counterexample(std::size_t cycles = 3, Real epsilon = 1.0,
                                              Real alpha_star = 0.8);

}  // namespace ftcons
