#include "ftcons/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ftcons {

namespace {

// Times within this relative distance of a boundary are treated as sitting on it.
constexpr Real kBoundarySnap = 1e-12;

Real snap_tolerance(Real t) { return kBoundarySnap * std::max<Real>(1.0, std::abs(t)); }

}  // namespace

SegmentTimeline::SegmentTimeline(std::vector<Real> durations, bool repeat)
    : durations_(std::move(durations)), repeat_(repeat) {
    if (durations_.empty()) {
        throw std::invalid_argument("timeline needs at least one segment");
    }
    offsets_.reserve(durations_.size() + 1);
    offsets_.push_back(0.0);
    for (Real d : durations_) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("segment duration must be positive and finite, got " +
                                        std::to_string(d));
        }
        offsets_.push_back(offsets_.back() + d);
    }
}

Real SegmentTimeline::shortest() const noexcept {
    return durations_.empty() ? 0.0 : *std::min_element(durations_.begin(), durations_.end());
}

std::size_t SegmentTimeline::index_at(Real t) const {
    if (durations_.empty()) {
        throw std::out_of_range("empty timeline");
    }
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::out_of_range("timeline query at negative or non-finite time");
    }
    const Real p = period();
    Real local = t;
    if (repeat_) {
        local = t - std::floor(t / p) * p;
    } else if (t >= p - snap_tolerance(p)) {
        throw std::out_of_range("time " + std::to_string(t) + " is past the schedule horizon " +
                                std::to_string(p));
    }
    const Real tol = snap_tolerance(t);
    // First offset strictly greater than local (+tol); the segment before it is active.
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), local + tol);
    auto idx = static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
    if (idx >= durations_.size()) {
        idx = 0;  // local sits on the period boundary: next pass begins
    }
    return idx;
}

std::vector<Real> SegmentTimeline::boundaries_in(Real t0, Real t1) const {
    std::vector<Real> out;
    if (durations_.empty() || !(t1 > t0)) {
        return out;
    }
    const Real p = period();
    const auto inside = [&](Real b) {
        const Real tol = snap_tolerance(b);
        return b > t0 + tol && b < t1 - tol;
    };
    if (!repeat_) {
        for (std::size_t k = 1; k < offsets_.size(); ++k) {
            if (inside(offsets_[k])) {
                out.push_back(offsets_[k]);
            }
        }
        return out;
    }
    auto cycle = static_cast<long long>(std::floor(std::max<Real>(t0, 0.0) / p));
    for (;; ++cycle) {
        const Real base = static_cast<Real>(cycle) * p;
        if (base >= t1) {
            break;
        }
        for (std::size_t k = 1; k < offsets_.size(); ++k) {
            const Real b = base + offsets_[k];
            if (inside(b)) {
                out.push_back(b);
            }
        }
    }
    return out;
}

std::vector<Real> step_times(Real a, Real b, Real dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step size must be positive");
    }
    if (!(b > a)) {
        return {a};
    }
    const Real ratio = (b - a) / dt;
    auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max<Real>(1.0, ratio)));
    steps = std::max<std::size_t>(steps, 1);
    const Real h = (b - a) / static_cast<Real>(steps);
    std::vector<Real> times(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) {
        times[k] = a + static_cast<Real>(k) * h;
    }
    times[steps] = b;
    return times;
}

}  // namespace ftcons
