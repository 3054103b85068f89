#include "ftcons/simulator.hpp"

#include "ftcons/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace ftcons {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Euler ? "euler" : "rk4"; }

Scheme parse_scheme(std::string_view name) {
    if (name == "euler") {
        return Scheme::Euler;
    }
    if (name == "rk4") {
        return Scheme::RK4;
    }
    throw std::invalid_argument("unknown integration scheme '" + std::string(name) +
                                "' (expected euler or rk4)");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("integrator dt must be positive");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("integrator horizon must be positive");
    }
    if (!(consensus_tol > 0.0)) {
        throw std::invalid_argument("consensus_tol must be positive");
    }
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Switch:
            return "switch";
        case EventKind::ConsensusSnap:
            return "consensus-snap";
        case EventKind::Merge:
            return "merge";
    }
    return "unknown";
}

EventKind parse_event_kind(std::string_view name) {
    for (auto k : {EventKind::Switch, EventKind::ConsensusSnap, EventKind::Merge}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown event kind '" + std::string(name) + "'");
}

std::optional<Real> Trace::first_event(EventKind kind) const {
    for (const auto& e : events) {
        if (e.kind == kind) {
            return e.t;
        }
    }
    return std::nullopt;
}

std::vector<Real> Trace::event_times(EventKind kind) const {
    std::vector<Real> out;
    for (const auto& e : events) {
        if (e.kind == kind) {
            out.push_back(e.t);
        }
    }
    return out;
}

AgentState step(const RightHandSide& rhs, const AgentState& state, Real dt, Scheme scheme) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step: dt must be positive");
    }
    const Real t = state.t;
    AgentState next{t + dt, state.r};
    if (scheme == Scheme::Euler) {
        next.r.add_scaled(dt, rhs(t, state.r));
    } else {
        const Matrix k1 = rhs(t, state.r);
        Matrix probe = state.r;
        probe.add_scaled(0.5 * dt, k1);
        const Matrix k2 = rhs(t + 0.5 * dt, probe);
        probe = state.r;
        probe.add_scaled(0.5 * dt, k2);
        const Matrix k3 = rhs(t + 0.5 * dt, probe);
        probe = state.r;
        probe.add_scaled(dt, k3);
        const Matrix k4 = rhs(t + dt, probe);
        next.r.add_scaled(dt / 6.0, k1);
        next.r.add_scaled(dt / 3.0, k2);
        next.r.add_scaled(dt / 3.0, k3);
        next.r.add_scaled(dt / 6.0, k4);
    }
    if (!next.r.all_finite()) {
        std::ostringstream os;
        os << "integration blew up: non-finite state after the step at t = " << t;
        throw IntegrationError(os.str());
    }
    return next;
}

namespace {

Real max_spread(const Matrix& r) {
    Real worst = 0.0;
    for (std::size_t c = 0; c < r.cols(); ++c) {
        Real lo = r(0, c);
        Real hi = lo;
        for (std::size_t i = 1; i < r.rows(); ++i) {
            lo = std::min(lo, r(i, c));
            hi = std::max(hi, r(i, c));
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

void snap_to_midpoint(Matrix& r) {
    for (std::size_t c = 0; c < r.cols(); ++c) {
        Real lo = r(0, c);
        Real hi = lo;
        for (std::size_t i = 1; i < r.rows(); ++i) {
            lo = std::min(lo, r(i, c));
            hi = std::max(hi, r(i, c));
        }
        const Real mid = lo + 0.5 * (hi - lo);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            r(i, c) = mid;
        }
    }
}

Matrix controls_of(const ControllerSpec& spec, const DirectedGraph& g, const Matrix& r) {
    Matrix u(r.rows(), r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        control_input(spec, g, r, i, u.row(i));
    }
    return u;
}

}  // namespace

Trace simulate(const ControllerSpec& spec, const InherentDynamics& dyn,
               const SwitchingSchedule& schedule, const Matrix& r0, const IntegratorConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (r0.rows() != schedule.agents()) {
        throw std::invalid_argument("initial state has " + std::to_string(r0.rows()) +
                                    " agents but the schedule has " +
                                    std::to_string(schedule.agents()));
    }
    if (r0.cols() == 0) {
        throw std::invalid_argument("initial state has zero dimensions");
    }
    if (!r0.all_finite()) {
        throw std::invalid_argument("initial state contains non-finite values");
    }
    if (cfg.dt > schedule.shortest_segment() * (1.0 + 1e-12)) {
        throw std::invalid_argument("dt exceeds the shortest schedule segment");
    }
    if (!schedule.repeats() && cfg.horizon > schedule.period() * (1.0 + 1e-12)) {
        throw std::invalid_argument("horizon runs past the end of a non-repeating schedule");
    }

    Trace trace;
    AgentState state{0.0, r0};
    bool snapped = false;

    const auto record = [&](const DirectedGraph& g) {
        trace.times.push_back(state.t);
        trace.states.push_back(state.r);
        trace.disagreement.push_back(max_spread(state.r));
        if (cfg.record_controls) {
            trace.controls.push_back(snapped ? Matrix(state.r.rows(), state.r.cols())
                                             : controls_of(spec, g, state.r));
        }
    };
    const auto try_snap = [&] {
        if (!snapped && max_spread(state.r) < cfg.consensus_tol) {
            snap_to_midpoint(state.r);
            snapped = true;
            trace.events.push_back({state.t, EventKind::ConsensusSnap});
        }
    };

    try_snap();
    record(schedule.graph_at(0.0));

    std::vector<Real> breaks{0.0};
    for (Real s : schedule.switch_times_in(0.0, cfg.horizon)) {
        breaks.push_back(s);
    }
    breaks.push_back(cfg.horizon);

    for (std::size_t w = 0; w + 1 < breaks.size(); ++w) {
        const Real a = breaks[w];
        const Real b = breaks[w + 1];
        const DirectedGraph& g = schedule.graph_at(a + 0.5 * (b - a));
        const RightHandSide rhs = [&](Real t, const Matrix& r) {
            return snapped ? inherent_rhs(dyn, t, r) : closed_loop_rhs(spec, dyn, g, t, r);
        };
        const auto times = step_times(a, b, cfg.dt);
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            state.t = times[k];
            state = step(rhs, state, times[k + 1] - times[k], cfg.scheme);
            state.t = times[k + 1];
            try_snap();
            record(g);
        }
        if (w + 2 < breaks.size()) {
            trace.events.push_back({b, EventKind::Switch});
        }
    }
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const TraceEvent& x, const TraceEvent& y) { return x.t < y.t; });
    return trace;
}

}  // namespace ftcons
