#include "ftcons/comparison.hpp"

#include "ftcons/gains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ftcons {

namespace {

void require_sorted(std::span<const Real> xi) {
    if (!std::is_sorted(xi.begin(), xi.end())) {
        throw std::invalid_argument("G-tilde needs the states sorted ascending");
    }
}

void require_alpha(Real alpha_star) {
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) {
        throw std::invalid_argument("alpha_star must lie strictly inside (0, 1)");
    }
}

Real gap_integral(Real d, Real alpha) {
    if (d <= 1.0) {
        return std::pow(d, 1.0 + alpha) / (1.0 + alpha);
    }
    return 1.0 / (1.0 + alpha) + 0.5 * (d * d - 1.0);
}

std::vector<Real> sorted_column(const Matrix& m) {
    auto v = m.column_values(0);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

Real lyapunov_g_tilde(std::span<const Real> xi, Real alpha_star) {
    require_alpha(alpha_star);
    require_sorted(xi);
    Real sum = 0.0;
    for (std::size_t i = 1; i < xi.size(); ++i) {
        sum += gap_integral(xi[i] - xi[i - 1], alpha_star);
    }
    return sum;
}

Real lyapunov_g_tilde_small(std::span<const Real> xi, Real alpha_star) {
    require_alpha(alpha_star);
    require_sorted(xi);
    Real sum = 0.0;
    for (std::size_t i = 1; i < xi.size(); ++i) {
        const Real d = xi[i] - xi[i - 1];
        if (d >= 1.0) {
            throw std::invalid_argument("small-gap form needs every gap below 1");
        }
        sum += std::pow(d, 1.0 + alpha_star);
    }
    return sum / (1.0 + alpha_star);
}

void BoundParams::validate() const {
    require_alpha(alpha_star);
    if (!(a_lower > 0.0) || !(q > 0.0) || !(epsilon2 > 0.0)) {
        throw std::invalid_argument("bound needs a_lower, q and epsilon2 positive");
    }
    if (!(g_tilde_at_tbar >= 0.0) || !std::isfinite(g_tilde_at_tbar)) {
        throw std::invalid_argument("G-tilde at t_bar must be finite and nonnegative");
    }
}

Real BoundParams::rate() const {
    const Real a = alpha_star;
    return a_lower * q * epsilon2 * std::pow(1.0 + a, 2.0 * a / (1.0 + a));
}

Real mu_trajectory(const BoundParams& p, Real t_minus_tbar) {
    p.validate();
    if (t_minus_tbar <= 0.0) {
        return p.g_tilde_at_tbar;
    }
    const Real e = (1.0 - p.alpha_star) / (1.0 + p.alpha_star);
    const Real v = std::pow(p.g_tilde_at_tbar, e) - e * p.rate() * t_minus_tbar;
    return v > 0.0 ? std::pow(v, 1.0 / e) : 0.0;
}

Real settling_bound(const BoundParams& p) {
    p.validate();
    const Real e = (1.0 - p.alpha_star) / (1.0 + p.alpha_star);
    return std::pow(p.g_tilde_at_tbar, e) / (e * p.rate());
}

std::vector<Real> g_tilde_series(const Trace& trace, Real alpha_star) {
    std::vector<Real> out;
    out.reserve(trace.size());
    for (const auto& s : trace.states) {
        if (s.cols() != 1) {
            throw std::invalid_argument("G-tilde is defined for scalar agents only");
        }
        out.push_back(lyapunov_g_tilde(sorted_column(s), alpha_star));
    }
    return out;
}

std::optional<std::size_t> find_tbar_index(const Trace& trace) {
    std::optional<std::size_t> tbar;
    for (std::size_t k = trace.size(); k-- > 0;) {
        const auto v = sorted_column(trace.states[k]);
        Real widest = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) {
            widest = std::max(widest, v[i] - v[i - 1]);
        }
        if (widest >= 1.0 - 1e-9) {
            break;
        }
        tbar = k;
    }
    return tbar;
}

DominanceReport dominance_audit(const Trace& primary, const Trace& comparison, Real tol) {
    if (primary.times != comparison.times) {
        throw std::invalid_argument("dominance audit needs both traces on the same time grid");
    }
    if (primary.agents() != comparison.agents()) {
        throw std::invalid_argument("dominance audit needs the same agent count in both traces");
    }
    DominanceReport rep;
    rep.tol = tol;
    rep.samples = primary.size();
    rep.max_excess = -std::numeric_limits<Real>::infinity();
    for (std::size_t k = 0; k < primary.size(); ++k) {
        const Real g = primary.disagreement[k];
        const Real f = comparison.disagreement[k];
        rep.max_excess = std::max(rep.max_excess, g - f);
        if (g > f + tol) {
            rep.violations.push_back({k, primary.times[k], g, f});
        }
    }
    return rep;
}

CompareResult run_comparison(const ControllerSpec& spec, const InherentDynamics& dyn,
                             const SwitchingSchedule& schedule, const Matrix& r0,
                             const IntegratorConfig& cfg, const CompareOptions& options) {
    if (r0.cols() != 1) {
        throw std::invalid_argument("comparison runs need scalar agents (m = 1)");
    }
    CompareResult res;
    res.primary = simulate(spec, dyn, schedule, r0, cfg);

    ComparisonParams& p = res.params;
    p.gamma_hat = options.gamma_hat.value_or(dyn.gamma() + options.epsilon1);
    p.beta = options.beta.value_or(spec.beta);
    p.a_lower = schedule.bounds().lower;
    p.alpha_star = spec.alpha_star;
    p.merge_tol = options.merge_tol;

    const ComparisonScript script =
        options.script.value_or(ComparisonScript::following(schedule));

    if (!options.reanchor) {
        res.comparison = simulate_comparison(p, r0.column_values(0), cfg, script);
    } else {
        // One comparison run per schedule window, each started from the closed-loop state.
        std::vector<Real> breaks{0.0};
        for (Real s : schedule.switch_times_in(0.0, cfg.horizon)) {
            breaks.push_back(s);
        }
        breaks.push_back(cfg.horizon);
        std::size_t k = 0;
        for (std::size_t w = 0; w + 1 < breaks.size(); ++w) {
            while (res.primary.times[k] < breaks[w]) {
                ++k;
            }
            IntegratorConfig window = cfg;
            window.horizon = breaks[w + 1];
            Trace part = simulate_comparison(p, res.primary.states[k].column_values(0), window,
                                             script, breaks[w]);
            const std::size_t skip = res.comparison.size() == 0 ? 0 : 1;
            Trace& c = res.comparison;
            c.times.insert(c.times.end(), part.times.begin() + skip, part.times.end());
            c.states.insert(c.states.end(), part.states.begin() + skip, part.states.end());
            c.disagreement.insert(c.disagreement.end(), part.disagreement.begin() + skip,
                                  part.disagreement.end());
            c.events.insert(c.events.end(), part.events.begin(), part.events.end());
            if (w + 2 < breaks.size()) {
                c.events.push_back({breaks[w + 1], EventKind::Switch});
            }
        }
    }

    res.dominance = dominance_audit(res.primary, res.comparison, options.dominance_tol);
    res.g_tilde = g_tilde_series(res.comparison, p.alpha_star);
    res.g_tilde_monotone = true;
    for (std::size_t k = 1; k < res.g_tilde.size(); ++k) {
        if (res.g_tilde[k] > res.g_tilde[k - 1] + 1e-8) {
            res.g_tilde_monotone = false;
            break;
        }
    }
    res.tbar_index = find_tbar_index(res.comparison);

    const std::size_t n = schedule.agents();
    if (n >= 2 && res.tbar_index) {
        const Real q = chain_constant(n - 1);
        const Real eps2 = p.beta - p.gamma_hat / (p.a_lower * q);
        if (eps2 > 0.0) {
            BoundParams b{p.alpha_star, p.a_lower, q, eps2, res.g_tilde[*res.tbar_index]};
            res.bound = b;
            res.settling_bound = settling_bound(b);
            const Real tbar = res.comparison.times[*res.tbar_index];
            for (std::size_t k = *res.tbar_index; k < res.comparison.size(); ++k) {
                res.mu.push_back(mu_trajectory(b, res.comparison.times[k] - tbar));
            }
        }
    }
    return res;
}

}  // namespace ftcons
