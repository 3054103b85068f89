#include "ftcons/graph.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace ftcons {

void WeightBounds::validate() const {
    if (!(lower > 0.0) || !(upper >= lower)) {
        throw std::invalid_argument("weight bounds must satisfy 0 < lower <= upper");
    }
}

DirectedGraph::DirectedGraph(std::size_t agents) : neighbors_(agents) {
    if (agents == 0) {
        throw std::invalid_argument("graph needs at least one agent");
    }
}

DirectedGraph& DirectedGraph::add_neighbor(std::size_t i, std::size_t j, Real weight) {
    const std::size_t n = size();
    if (i >= n || j >= n) {
        throw std::out_of_range("edge (" + std::to_string(j) + " -> " + std::to_string(i) +
                                ") outside a graph of " + std::to_string(n) + " agents");
    }
    if (i == j) {
        throw std::invalid_argument("agent " + std::to_string(i) + " cannot be its own neighbor");
    }
    if (!(weight > 0.0)) {
        throw std::invalid_argument("edge weights must be positive");
    }
    auto& list = neighbors_[i];
    auto it = std::lower_bound(list.begin(), list.end(), j,
                               [](const Neighbor& nb, std::size_t a) { return nb.agent < a; });
    if (it != list.end() && it->agent == j) {
        it->weight = weight;
    } else {
        list.insert(it, Neighbor{j, weight});
    }
    return *this;
}

std::size_t DirectedGraph::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& list : neighbors_) {
        total += list.size();
    }
    return total;
}

Real DirectedGraph::weight(std::size_t i, std::size_t j) const {
    for (const auto& nb : neighbors_.at(i)) {
        if (nb.agent == j) {
            return nb.weight;
        }
    }
    return 0.0;
}

Real DirectedGraph::min_weight() const noexcept {
    Real w = std::numeric_limits<Real>::infinity();
    for (const auto& list : neighbors_) {
        for (const auto& nb : list) {
            w = std::min(w, nb.weight);
        }
    }
    return w;
}

Real DirectedGraph::max_weight() const noexcept {
    Real w = 0.0;
    for (const auto& list : neighbors_) {
        for (const auto& nb : list) {
            w = std::max(w, nb.weight);
        }
    }
    return w;
}

bool DirectedGraph::operator==(const DirectedGraph& other) const {
    if (size() != other.size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        const auto& a = neighbors_[i];
        const auto& b = other.neighbors_[i];
        if (a.size() != b.size()) {
            return false;
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].agent != b[k].agent || a[k].weight != b[k].weight) {
                return false;
            }
        }
    }
    return true;
}

Matrix laplacian(const DirectedGraph& g) {
    const std::size_t n = g.size();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : g.neighbors(i)) {
            l(i, nb.agent) = -nb.weight;
            l(i, i) += nb.weight;
        }
    }
    return l;
}

std::optional<std::size_t> spanning_tree_root(const DirectedGraph& g) {
    const std::size_t n = g.size();
    // Outgoing adjacency: j -> i whenever j is a neighbor of i.
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : g.neighbors(i)) {
            out[nb.agent].push_back(i);
        }
    }
    std::vector<char> seen(n);
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < n; ++root) {
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, root);
        seen[root] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : out[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached == n) {
            return root;
        }
    }
    return std::nullopt;
}

bool has_directed_spanning_tree(const DirectedGraph& g) { return spanning_tree_root(g).has_value(); }

DirectedGraph graph_union(std::span<const DirectedGraph> graphs) {
    if (graphs.empty()) {
        throw std::invalid_argument("graph_union of an empty list");
    }
    DirectedGraph out(graphs.front().size());
    for (const auto& g : graphs) {
        if (g.size() != out.size()) {
            throw std::invalid_argument("graph_union: agent counts differ");
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (const auto& nb : g.neighbors(i)) {
                out.add_neighbor(i, nb.agent, std::max(nb.weight, out.weight(i, nb.agent)));
            }
        }
    }
    return out;
}

namespace {

std::vector<Real> durations_of(const std::vector<ScheduleSegment>& segments) {
    std::vector<Real> d;
    d.reserve(segments.size());
    for (const auto& s : segments) {
        d.push_back(s.duration);
    }
    return d;
}

}  // namespace

SwitchingSchedule::SwitchingSchedule(std::vector<ScheduleSegment> segments, bool repeat,
                                     Real dwell_time, WeightBounds bounds)
    : segments_(std::move(segments)), dwell_time_(dwell_time), bounds_(bounds) {
    if (segments_.empty()) {
        throw std::invalid_argument("schedule needs at least one segment");
    }
    if (!(dwell_time_ > 0.0)) {
        throw std::invalid_argument("dwell time must be positive");
    }
    bounds_.validate();
    const std::size_t n = segments_.front().graph.size();
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (s.duration < dwell_time_) {
            throw std::invalid_argument("segment " + std::to_string(k) + " lasts " +
                                        std::to_string(s.duration) +
                                        " s, shorter than the dwell time " +
                                        std::to_string(dwell_time_) + " s");
        }
        if (s.graph.size() != n) {
            throw std::invalid_argument("segment " + std::to_string(k) +
                                        " has a different agent count");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& nb : s.graph.neighbors(i)) {
                if (!bounds_.contains(nb.weight)) {
                    throw std::invalid_argument("segment " + std::to_string(k) + " weight " +
                                                std::to_string(nb.weight) +
                                                " lies outside the declared weight bounds");
                }
            }
        }
    }
    timeline_ = SegmentTimeline(durations_of(segments_), repeat);
}

const DirectedGraph& SwitchingSchedule::graph_at(Real t) const {
    return segments_[timeline_.index_at(t)].graph;
}

}  // namespace ftcons
