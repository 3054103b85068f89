#include "ftcons/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ftcons {

std::vector<Real> disagreement(const Matrix& r) {
    std::vector<Real> out(r.cols(), 0.0);
    if (r.rows() == 0) {
        return out;
    }
    for (std::size_t c = 0; c < r.cols(); ++c) {
        Real lo = r(0, c);
        Real hi = lo;
        for (std::size_t i = 1; i < r.rows(); ++i) {
            lo = std::min(lo, r(i, c));
            hi = std::max(hi, r(i, c));
        }
        out[c] = hi - lo;
    }
    return out;
}

Real max_disagreement(const Matrix& r) {
    const auto d = disagreement(r);
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

std::vector<Real> log_disagreement(const Matrix& r) {
    auto d = disagreement(r);
    for (Real& v : d) {
        v = std::log1p(v);
    }
    return d;
}

std::optional<Real> settling_time(const Trace& trace, Real tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("settling tolerance must be positive");
    }
    std::optional<Real> t;
    for (std::size_t k = trace.size(); k-- > 0;) {
        if (trace.disagreement[k] > tol) {
            break;
        }
        t = trace.times[k];
    }
    return t;
}

std::optional<std::pair<Real, Real>> increasing_interval(const Trace& trace, Real min_rise) {
    std::size_t k = 0;
    while (k + 1 < trace.size()) {
        if (!(trace.disagreement[k + 1] > trace.disagreement[k])) {
            ++k;
            continue;
        }
        std::size_t end = k + 1;
        while (end + 1 < trace.size() && trace.disagreement[end + 1] > trace.disagreement[end]) {
            ++end;
        }
        if (trace.disagreement[end] - trace.disagreement[k] > min_rise) {
            return std::pair{trace.times[k], trace.times[end]};
        }
        k = end;
    }
    return std::nullopt;
}

LipschitzReport lipschitz_audit(const InherentDynamics& dyn, Real lo, Real hi, std::size_t samples,
                                std::uint64_t seed, Real t_max) {
    if (samples < 2) {
        throw std::invalid_argument("lipschitz audit needs at least 2 samples");
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("lipschitz audit needs a nonempty domain");
    }
    // Additive-recurrence (R2) sequence in the unit square, shifted by the seed.
    constexpr Real g = 1.32471795724474602596;  // plastic number
    constexpr Real a1 = 1.0 / g;
    constexpr Real a2 = 1.0 / (g * g);
    const Real shift = std::fmod(static_cast<Real>(seed % 1000003) * 0.6180339887498949, 1.0);

    constexpr std::size_t time_points = 16;
    LipschitzReport rep;
    rep.gamma = dyn.gamma();
    for (std::size_t s = 0; s < samples; ++s) {
        const Real u = std::fmod(shift + a1 * static_cast<Real>(s + 1), 1.0);
        const Real v = std::fmod(shift + a2 * static_cast<Real>(s + 1), 1.0);
        const Real a = lo + (hi - lo) * u;
        const Real b = lo + (hi - lo) * v;
        if (a == b) {
            continue;
        }
        for (std::size_t k = 0; k < time_points; ++k) {
            const Real t = t_max * static_cast<Real>(k) / static_cast<Real>(time_points - 1);
            const Real ratio = std::abs(dyn(t, a) - dyn(t, b)) / std::abs(a - b);
            ++rep.pairs;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst_a = a;
                rep.worst_b = b;
                rep.worst_t = t;
            }
        }
    }
    rep.pass = rep.max_ratio <= rep.gamma * (1.0 + 1e-9);
    return rep;
}

std::vector<bool> spanning_tree_audit(const SwitchingSchedule& schedule) {
    std::vector<bool> out;
    for (const auto& seg : schedule.segments()) {
        out.push_back(has_directed_spanning_tree(seg.graph));
    }
    return out;
}

ConvergenceReport summarize(const Trace& trace, const SwitchingSchedule& schedule, Real settling_tol,
                            std::optional<Real> analytic_bound) {
    if (trace.size() == 0) {
        throw std::invalid_argument("cannot summarize an empty trace");
    }
    ConvergenceReport rep;
    rep.horizon = trace.times.back();
    rep.settling_tol = settling_tol;
    rep.settling_time = settling_time(trace, settling_tol);
    rep.final_g = trace.disagreement.back();
    rep.g_monotone = std::is_sorted(trace.disagreement.rbegin(), trace.disagreement.rend());
    rep.first_increase = increasing_interval(trace);
    rep.snap_time = trace.first_event(EventKind::ConsensusSnap);
    rep.analytic_bound = analytic_bound;
    rep.per_segment_spanning_tree = spanning_tree_audit(schedule);

    const auto switches = trace.event_times(EventKind::Switch);
    std::size_t w = 0;
    rep.window_max_g.push_back(0.0);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        rep.window_max_g.back() = std::max(rep.window_max_g.back(), trace.disagreement[k]);
        if (w < switches.size() && trace.times[k] >= switches[w] && k + 1 < trace.size()) {
            // The sample at the switch closes one window and opens the next.
            rep.window_max_g.push_back(trace.disagreement[k]);
            ++w;
        }
    }
    return rep;
}

std::string format_report(const ConvergenceReport& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    const auto opt = [&](const std::optional<Real>& v) -> std::ostream& {
        if (v) {
            return os << *v;
        }
        return os << "none";
    };
    os << "horizon = " << r.horizon << '\n';
    os << "settling_tol = " << r.settling_tol << '\n';
    os << "settling_time = ";
    opt(r.settling_time) << '\n';
    os << "final_G = " << r.final_g << '\n';
    os << "G_monotone = " << (r.g_monotone ? "true" : "false") << '\n';
    os << "first_G_increase = ";
    if (r.first_increase) {
        os << r.first_increase->first << " .. " << r.first_increase->second << '\n';
    } else {
        os << "none\n";
    }
    os << "snap_time = ";
    opt(r.snap_time) << '\n';
    os << "analytic_bound = ";
    opt(r.analytic_bound) << '\n';
    os << "window_max_G =";
    for (Real v : r.window_max_g) {
        os << ' ' << v;
    }
    os << '\n';
    os << "segment_spanning_tree =";
    for (bool b : r.per_segment_spanning_tree) {
        os << ' ' << (b ? "true" : "false");
    }
    os << '\n';
    return os.str();
}

Real one_sided_extinction_time(Real d0, Real epsilon, Real alpha_star) {
    if (!(d0 >= 0.0) || !(epsilon > 0.0) || !(alpha_star > 0.0 && alpha_star < 1.0)) {
        throw std::invalid_argument("extinction time needs d0 >= 0, epsilon > 0, alpha in (0, 1)");
    }
    return std::pow(d0, 1.0 - alpha_star) / (epsilon * (1.0 - alpha_star));
}

namespace {

// Gap after integrating d' = -eps sig(d)^a from d0 over [0, T]. Steps shrink
// with the gap so each covers at most an eighth of its remaining lifetime;
// a fixed step would let RK4 settle on a spurious small-gap fixed point.
Real gap_after(Real d0, Real epsilon, Real alpha, Real T, Real dt) {
    const RightHandSide rhs = [&](Real, const Matrix& m) {
        return Matrix::column({-epsilon * sig_pow(m(0, 0), alpha)});
    };
    AgentState s{0.0, Matrix::column({d0})};
    while (s.t < T) {
        const Real d = s.r(0, 0);
        if (d <= 0.0) {
            return 0.0;
        }
        const Real life = one_sided_extinction_time(d, epsilon, alpha);
        if (s.t + life / 8.0 == s.t) {
            return 0.0;  // what is left closes below the resolution of t
        }
        const Real h = std::min({dt, T - s.t, life / 8.0});
        s = step(rhs, s, h, Scheme::RK4);
    }
    return std::abs(s.r(0, 0));
}

}  // namespace

Real simulated_meeting_time(Real d0, Real epsilon, Real alpha_star, Real meet_tol, Real dt) {
    if (!(meet_tol > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("meeting time needs meet_tol > 0 and dt > 0");
    }
    if (d0 <= meet_tol) {
        return 0.0;
    }
    Real lo = 0.0;
    Real hi = std::max(dt, 0.5 * one_sided_extinction_time(d0, epsilon, alpha_star));
    while (gap_after(d0, epsilon, alpha_star, hi, dt) > meet_tol) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) {
            throw std::runtime_error("gap never closes");
        }
    }
    for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const Real mid = 0.5 * (lo + hi);
        if (gap_after(d0, epsilon, alpha_star, mid, dt) > meet_tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

CounterexampleScenario ring_counterexample(std::size_t cycles, Real epsilon, Real alpha_star) {
    if (cycles == 0) {
        throw std::invalid_argument("counterexample needs at least one cycle");
    }
    // Agent k follows agent k + 1 (mod 3); 0-based indices.
    DirectedGraph g23(3), g31(3), g12(3);
    g23.add_neighbor(1, 2);
    g31.add_neighbor(2, 0);
    g12.add_neighbor(0, 1);

    const Real first = simulated_meeting_time(1.0, epsilon, alpha_star);
    const Real rest = simulated_meeting_time(2.0, epsilon, alpha_star);

    std::vector<ScheduleSegment> segs{{first, g23}};
    for (std::size_t c = 0; c < cycles; ++c) {
        segs.push_back({rest, g31});
        segs.push_back({rest, g12});
        segs.push_back({rest, g23});
    }
    ControllerSpec spec;
    spec.family = ControllerFamily::PureSig;
    spec.beta = epsilon;
    spec.alpha_star = alpha_star;
    return CounterexampleScenario{
        SwitchingSchedule(std::move(segs), false, std::min(first, rest), WeightBounds{1.0, 1.0}),
        Matrix::column({0.0, 1.0, 2.0}),
        spec,
        InherentDynamics::zero(),
        {g31, g12, g23},
        cycles,
    };
}

}  // namespace ftcons
