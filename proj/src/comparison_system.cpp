#include "ftcons/comparison_system.hpp"

#include "ftcons/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace ftcons {

std::string_view to_string(ComparisonKind kind) {
    return kind == ComparisonKind::MaxBelow ? "max_below" : "min_above";
}

ComparisonKind parse_comparison_kind(std::string_view name) {
    if (name == "max_below") {
        return ComparisonKind::MaxBelow;
    }
    if (name == "min_above") {
        return ComparisonKind::MinAbove;
    }
    throw std::invalid_argument("unknown comparison kind '" + std::string(name) +
                                "' (expected max_below or min_above)");
}

void ComparisonParams::validate() const {
    if (!(gamma_hat >= 0.0) || !(beta >= 0.0) || !(a_lower > 0.0)) {
        throw std::invalid_argument("comparison system needs gamma_hat >= 0, beta >= 0, a_lower > 0");
    }
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) {
        throw std::invalid_argument("alpha_star must lie strictly inside (0, 1)");
    }
    if (!(merge_tol > 0.0)) {
        throw std::invalid_argument("merge_tol must be positive");
    }
}

namespace {

Real merge_band(std::span<const Real> xi, Real merge_tol) {
    Real scale = 1.0;
    for (Real v : xi) {
        scale = std::max(scale, std::abs(v));
    }
    return merge_tol * scale;
}

std::vector<std::size_t> ascending_order(std::span<const Real> xi) {
    std::vector<std::size_t> order(xi.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xi[a] < xi[b]; });
    return order;
}

struct Cluster {
    std::size_t first;  // position in the ascending order
    std::size_t count;
    Real value;
};

std::vector<Cluster> clusters_of(std::span<const Real> xi, const std::vector<std::size_t>& order,
                                 Real band) {
    std::vector<Cluster> out;
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Real v = xi[order[p]];
        if (!out.empty() && v - xi[order[p - 1]] <= band) {
            ++out.back().count;
        } else {
            out.push_back({p, 1, v});
        }
    }
    return out;
}

// Pool-adjacent-violators on the pre-step order: any adjacent pair whose gap
// fell to the band (or went negative) is pooled at its mean. Returns the number
// of distinct groups afterwards.
std::size_t coalesce(std::span<Real> xi, const std::vector<std::size_t>& order, Real band) {
    struct Block {
        std::size_t first;
        std::size_t count;
        Real sum;
        Real mean() const { return sum / static_cast<Real>(count); }
    };
    std::vector<Block> blocks;
    for (std::size_t p = 0; p < order.size(); ++p) {
        blocks.push_back({p, 1, xi[order[p]]});
        while (blocks.size() >= 2 &&
               blocks.back().mean() - blocks[blocks.size() - 2].mean() <= band) {
            Block top = blocks.back();
            blocks.pop_back();
            blocks.back().count += top.count;
            blocks.back().sum += top.sum;
        }
    }
    for (const auto& b : blocks) {
        if (b.count < 2) {
            continue;
        }
        const Real v = b.mean();
        for (std::size_t p = b.first; p < b.first + b.count; ++p) {
            xi[order[p]] = v;
        }
    }
    return blocks.size();
}

}  // namespace

ComparisonScript ComparisonScript::fixed(std::vector<ComparisonSegment> segments, bool repeat) {
    ComparisonScript s;
    std::vector<Real> durations;
    for (const auto& seg : segments) {
        durations.push_back(seg.duration);
        s.kinds_.push_back(seg.kind);
    }
    s.timeline_ = SegmentTimeline(std::move(durations), repeat);
    return s;
}

ComparisonScript ComparisonScript::following(const SwitchingSchedule& schedule) {
    ComparisonScript s;
    s.timeline_ = schedule.timeline();
    s.schedule_ = schedule;
    return s;
}

ComparisonKind ComparisonScript::kind_at(Real t, std::span<const Real> xi, Real merge_tol) const {
    if (!schedule_) {
        return kinds_[timeline_.index_at(t)];
    }
    // MaxBelow while the top cluster listens to someone outside it; a
    // spanning tree guarantees the bottom cluster does otherwise.
    const DirectedGraph& g = schedule_->graph_at(t);
    const Real top = *std::max_element(xi.begin(), xi.end());
    const Real band = merge_band(xi, merge_tol);
    const auto in_top = [&](std::size_t i) { return top - xi[i] <= band; };
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (!in_top(i)) {
            continue;
        }
        for (const auto& nb : g.neighbors(i)) {
            if (!in_top(nb.agent)) {
                return ComparisonKind::MaxBelow;
            }
        }
    }
    return ComparisonKind::MinAbove;
}

std::vector<Real> ComparisonScript::switch_times_in(Real t0, Real t1) const {
    return timeline_.boundaries_in(t0, t1);
}

namespace {

// Cluster membership is taken from a reference ordering so that an RK stage
// which overshoots a gap sees it as negative instead of re-sorting.
std::vector<Real> rhs_on_clusters(ComparisonKind kind, const ComparisonParams& params,
                                  std::span<const Real> xi, const std::vector<std::size_t>& order,
                                  const std::vector<Cluster>& clusters) {
    std::vector<Real> value(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Real sum = 0.0;
        for (std::size_t p = clusters[c].first; p < clusters[c].first + clusters[c].count; ++p) {
            sum += xi[order[p]];
        }
        value[c] = sum / static_cast<Real>(clusters[c].count);
    }
    const Real pull = params.coupling();
    std::vector<Real> out(xi.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Real d = params.gamma_hat * value[c];
        std::optional<Real> gap;
        if (kind == ComparisonKind::MaxBelow && c > 0) {
            gap = value[c] - value[c - 1];
        } else if (kind == ComparisonKind::MinAbove && c + 1 < clusters.size()) {
            gap = value[c] - value[c + 1];  // negative: pulls the agent up
        }
        if (gap) {
            d -= pull * sig_pow(*gap, exponent_schedule(std::abs(*gap), params.alpha_star));
        }
        for (std::size_t p = clusters[c].first; p < clusters[c].first + clusters[c].count; ++p) {
            out[order[p]] = d;
        }
    }
    return out;
}

}  // namespace

std::vector<Real> comparison_rhs(ComparisonKind kind, const ComparisonParams& params,
                                 std::span<const Real> xi) {
    const auto order = ascending_order(xi);
    return rhs_on_clusters(kind, params, xi, order,
                           clusters_of(xi, order, merge_band(xi, params.merge_tol)));
}

Trace simulate_comparison(const ComparisonParams& params, std::span<const Real> xi0,
                          const IntegratorConfig& cfg, const ComparisonScript& script,
                          Real t_start) {
    params.validate();
    cfg.validate();
    if (xi0.empty()) {
        throw std::invalid_argument("comparison system needs at least one agent");
    }
    if (!(cfg.horizon > t_start)) {
        throw std::invalid_argument("comparison horizon must exceed the start time");
    }
    Matrix x = Matrix::column(xi0);
    if (!x.all_finite()) {
        throw std::invalid_argument("comparison initial state contains non-finite values");
    }

    Trace trace;
    const auto spread = [](const Matrix& m) {
        const auto d = m.data();
        const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
        return *hi - *lo;
    };
    const auto record = [&](Real t) {
        trace.times.push_back(t);
        trace.states.push_back(x);
        trace.disagreement.push_back(spread(x));
    };

    std::size_t groups = coalesce(x.data(), ascending_order(x.data()),
                                  merge_band(x.data(), params.merge_tol));
    record(t_start);

    std::vector<Real> breaks{t_start};
    for (Real s : script.switch_times_in(t_start, cfg.horizon)) {
        breaks.push_back(s);
    }
    breaks.push_back(cfg.horizon);

    for (std::size_t w = 0; w + 1 < breaks.size(); ++w) {
        const auto times = step_times(breaks[w], breaks[w + 1], cfg.dt);
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            const Real t0 = times[k];
            const Real h = times[k + 1] - t0;
            const ComparisonKind kind =
                script.kind_at(t0 + 0.5 * h, x.data(), params.merge_tol);
            const auto order = ascending_order(x.data());
            const auto clusters =
                clusters_of(x.data(), order, merge_band(x.data(), params.merge_tol));
            const RightHandSide rhs = [&](Real, const Matrix& m) {
                return Matrix::column(rhs_on_clusters(kind, params, m.data(), order, clusters));
            };
            x = step(rhs, AgentState{t0, x}, h, cfg.scheme).r;
            // A gap the exact flow would close within h is closed here; RK4 can
            // otherwise park on a spurious fixed point of the non-Lipschitz pull.
            const Real closing = std::pow((1.0 - params.alpha_star) * params.coupling() * h,
                                          1.0 / (1.0 - params.alpha_star));
            const Real band = std::max(merge_band(x.data(), params.merge_tol), std::min(closing, 1.0));
            const std::size_t now = coalesce(x.data(), order, band);
            if (now < groups) {
                trace.events.push_back({times[k + 1], EventKind::Merge});
            }
            groups = now;
            record(times[k + 1]);
        }
        if (w + 2 < breaks.size()) {
            trace.events.push_back({breaks[w + 1], EventKind::Switch});
        }
    }
    return trace;
}

}  // namespace ftcons
