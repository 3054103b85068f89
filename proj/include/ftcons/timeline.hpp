#pragma once

#include "ftcons/matrix.hpp"

#include <cstddef>
#include <vector>

namespace ftcons {

/// Piecewise-constant timing: consecutive segments of given durations,
/// optionally repeated forever. Segment k covers [start_k, end_k), so a query
/// at a boundary returns the segment that begins there.
class SegmentTimeline {
public:
    SegmentTimeline() = default;
    SegmentTimeline(std::vector<Real> durations, bool repeat);

    std::size_t segment_count() const noexcept { return durations_.size(); }
    bool repeats() const noexcept { return repeat_; }
    /// Duration of one pass through all segments.
    Real period() const noexcept { return offsets_.empty() ? 0.0 : offsets_.back(); }
    Real shortest() const noexcept;
    const std::vector<Real>& durations() const noexcept { return durations_; }

    /// Index of the segment active at time t. Throws std::out_of_range for
    /// t < 0, or t past the end of a non-repeating timeline.
    std::size_t index_at(Real t) const;

    /// Segment boundaries strictly inside (t0, t1), ascending.
    std::vector<Real> boundaries_in(Real t0, Real t1) const;

private:
    std::vector<Real> durations_;
    std::vector<Real> offsets_;  // offsets_[k] = start of segment k; back() = period
    bool repeat_ = false;
};

/// Sample times of a fixed-step march from a to b: N = ceil((b - a) / dt)
/// equal steps, last time exactly b. Shared by every integrator so that runs
/// over the same windows land on bit-identical grids.
std::vector<Real> step_times(Real a, Real b, Real dt);

}  // namespace ftcons
