#pragma once

#include "ftcons/graph.hpp"
#include "ftcons/matrix.hpp"
#include "ftcons/simulator.hpp"
#include "ftcons/timeline.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ftcons {

/// The two worst-case chain systems used to dominate the closed loop.
enum class ComparisonKind {
    /// Every agent is pulled toward the largest state below its own; minima feel only the drift.
    MaxBelow,
    /// Every agent is pulled toward the smallest state above its own; maxima feel only the drift.
    MinAbove,
};

std::string_view to_string(ComparisonKind kind);
ComparisonKind parse_comparison_kind(std::string_view name);

struct ComparisonParams {
    Real gamma_hat = 0.0;   ///< drift rate, gamma + epsilon1
    Real beta = 1.0;
    Real a_lower = 1.0;
    Real alpha_star = 0.8;
    /// States closer than merge_tol * max(1, max |xi|) are one agent from then on.
    Real merge_tol = 1e-10;

    void validate() const;
    Real coupling() const noexcept { return beta * a_lower; }
};

struct ComparisonSegment {
    Real duration;
    ComparisonKind kind;
};

/// Decides which comparison system is active at each time.
class ComparisonScript {
public:
    /// Time-driven: kinds follow the listed segments.
    static ComparisonScript fixed(std::vector<ComparisonSegment> segments, bool repeat);

    /// Follows a graph schedule: MaxBelow while some agent of the top cluster
    /// has a neighbor outside it in the active graph, MinAbove otherwise.
    /// Switch times are the schedule's.
    static ComparisonScript following(const SwitchingSchedule& schedule);

    ComparisonKind kind_at(Real t, std::span<const Real> xi, Real merge_tol) const;
    std::vector<Real> switch_times_in(Real t0, Real t1) const;

private:
    SegmentTimeline timeline_;
    std::vector<ComparisonKind> kinds_;
    std::optional<SwitchingSchedule> schedule_;
};

/// Per-agent derivative of the chosen comparison system. Agents whose states
/// coincide within the merge band are treated as one and get identical
/// derivatives; the pull uses the variable exponent of the gap.
std::vector<Real> comparison_rhs(ComparisonKind kind, const ComparisonParams& params,
                                 std::span<const Real> xi);

/// Integrates the comparison system over [t_start, cfg.horizon] on the same
/// kind of fixed-step grid as simulate(). After each step, agents whose order
/// collapsed (gap below the merge band, or crossed) are merged at their mean.
/// The trace's disagreement column holds F = max - min.
Trace simulate_comparison(const ComparisonParams& params, std::span<const Real> xi0,
                          const IntegratorConfig& cfg, const ComparisonScript& script,
                          Real t_start = 0.0);

}  // namespace ftcons
