#pragma once

#include "ftcons/matrix.hpp"
#include "ftcons/timeline.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ftcons {

/// Bounds on every nonzero adjacency weight of a schedule.
struct WeightBounds {
    Real lower = 1.0;
    Real upper = 1.0;

    /// Throws std::invalid_argument unless 0 < lower <= upper.
    void validate() const;
    bool contains(Real w) const noexcept { return w >= lower && w <= upper; }
};

struct Neighbor {
    std::size_t agent;
    Real weight;
};

/// Weighted directed interaction graph on agents 0..n-1.
///
/// Edges are stored on the receiving side: add_neighbor(i, j, w) records that
/// agent j is a neighbor of agent i (information flows j -> i) and sets the
/// adjacency entry a_ij = w. Self-loops are rejected.
class DirectedGraph {
public:
    explicit DirectedGraph(std::size_t agents);

    DirectedGraph& add_neighbor(std::size_t i, std::size_t j, Real weight = 1.0);

    std::size_t size() const noexcept { return neighbors_.size(); }
    std::size_t edge_count() const noexcept;

    /// a_ij, zero when j is not a neighbor of i.
    Real weight(std::size_t i, std::size_t j) const;
    bool has_neighbor(std::size_t i, std::size_t j) const { return weight(i, j) > 0.0; }
    std::span<const Neighbor> neighbors(std::size_t i) const { return neighbors_.at(i); }

    Real min_weight() const noexcept;
    Real max_weight() const noexcept;

    bool operator==(const DirectedGraph&) const;

private:
    std::vector<std::vector<Neighbor>> neighbors_;  // neighbors_[i] sorted by agent
};

/// L with l_ii = sum_j a_ij and l_ij = -a_ij.
Matrix laplacian(const DirectedGraph& g);

/// Smallest agent with a directed path to every other agent, if any.
std::optional<std::size_t> spanning_tree_root(const DirectedGraph& g);
bool has_directed_spanning_tree(const DirectedGraph& g);

/// Edge union of graphs on the same agents; shared edges keep the larger weight.
DirectedGraph graph_union(std::span<const DirectedGraph> graphs);

struct ScheduleSegment {
    Real duration;
    DirectedGraph graph;
};

/// Piecewise-constant sequence of interaction graphs. Construction validates
/// the standing assumptions: every segment lasts at least the dwell time, all
/// graphs have the same agent count and every weight lies within the bounds.
class SwitchingSchedule {
public:
    SwitchingSchedule(std::vector<ScheduleSegment> segments, bool repeat, Real dwell_time,
                      WeightBounds bounds);

    /// Graph active at t. At a switch instant the new segment's graph applies.
    const DirectedGraph& graph_at(Real t) const;
    std::size_t segment_index_at(Real t) const { return timeline_.index_at(t); }

    /// Segment boundaries strictly inside (t0, t1), ascending.
    std::vector<Real> switch_times_in(Real t0, Real t1) const {
        return timeline_.boundaries_in(t0, t1);
    }

    std::size_t agents() const noexcept { return segments_.front().graph.size(); }
    std::span<const ScheduleSegment> segments() const noexcept { return segments_; }
    bool repeats() const noexcept { return timeline_.repeats(); }
    Real period() const noexcept { return timeline_.period(); }
    Real dwell_time() const noexcept { return dwell_time_; }
    const WeightBounds& bounds() const noexcept { return bounds_; }
    Real shortest_segment() const noexcept { return timeline_.shortest(); }
    const SegmentTimeline& timeline() const noexcept { return timeline_; }

private:
    std::vector<ScheduleSegment> segments_;
    SegmentTimeline timeline_;
    Real dwell_time_;
    WeightBounds bounds_;
};

}  // namespace ftcons
