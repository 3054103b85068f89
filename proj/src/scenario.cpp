#include "ftcons/scenario.hpp"

#include "ftcons/expression.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <utility>
#include <sstream>

namespace ftcons {

namespace {

using nlohmann::json;

class Field {
public:
    Field(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return v_; }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_, msg); }

    bool has(const char* key) const { return v_.is_object() && v_.contains(key); }

    Field at(const char* key) const {
        if (!v_.is_object()) {
            fail("expected an object");
        }
        if (!v_.contains(key)) {
            throw ConfigError(join(key), "missing required field");
        }
        return {v_.at(key), join(key)};
    }

    Field item(std::size_t i) const { return {v_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

    std::size_t size() const {
        if (!v_.is_array()) {
            fail("expected an array");
        }
        return v_.size();
    }

    Real number() const {
        if (v_.is_number()) {
            return v_.get<Real>();
        }
        if (v_.is_string()) {
            try {
                return evaluate_constant(v_.get<std::string>());
            } catch (const ExpressionError& e) {
                fail(e.what());
            }
        }
        fail("expected a number or a constant expression");
    }

    Real number_or(const char* key, Real fallback) const {
        return has(key) ? at(key).number() : fallback;
    }

    std::size_t count() const {
        if (!v_.is_number_integer() || v_.get<long long>() < 0) {
            fail("expected a nonnegative integer");
        }
        return v_.get<std::size_t>();
    }

    bool boolean() const {
        if (!v_.is_boolean()) {
            fail("expected true or false");
        }
        return v_.get<bool>();
    }

    bool boolean_or(const char* key, bool fallback) const {
        return has(key) ? at(key).boolean() : fallback;
    }

    std::string text() const {
        if (!v_.is_string()) {
            fail("expected a string");
        }
        return v_.get<std::string>();
    }

    std::string text_or(const char* key, std::string fallback) const {
        return has(key) ? at(key).text() : fallback;
    }

    // Runs fn, re-raising plain argument errors as errors on this field.
    template <class Fn>
    auto guarded(Fn&& fn) const {
        try {
            return fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        } catch (const std::out_of_range& e) {
            fail(e.what());
        }
    }

private:
    std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& v_;
    std::string path_;
};

Matrix parse_initial(const Field& agents) {
    const std::size_t n = agents.at("n").count();
    const std::size_t m = agents.has("m") ? agents.at("m").count() : 1;
    if (n == 0) {
        agents.at("n").fail("need at least one agent");
    }
    if (m == 0) {
        agents.at("m").fail("need at least one dimension");
    }
    const Field init = agents.at("initial");
    if (init.size() != n) {
        init.fail("expected " + std::to_string(n) + " rows, got " + std::to_string(init.size()));
    }
    Matrix r(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const Field row = init.item(i);
        if (row.raw().is_array()) {
            if (row.size() != m) {
                row.fail("expected " + std::to_string(m) + " components");
            }
            for (std::size_t c = 0; c < m; ++c) {
                r(i, c) = row.item(c).number();
            }
        } else {
            if (m != 1) {
                row.fail("expected an array of " + std::to_string(m) + " components");
            }
            r(i, 0) = row.number();
        }
    }
    if (!r.all_finite()) {
        init.fail("initial state must be finite");
    }
    return r;
}

InherentDynamics parse_dynamics(const Field& d) {
    const std::string kind = d.at("kind").text();
    const auto gamma = [&](Real fallback) { return d.number_or("gamma", fallback); };
    const auto check = [&](Real g) {
        if (!(g >= 0.0)) {
            d.at("gamma").fail("gamma must be nonnegative");
        }
        return g;
    };
    if (kind == "zero") {
        return InherentDynamics::zero(check(gamma(0.0)));
    }
    if (kind == "sine") {
        return InherentDynamics::sine(check(gamma(1.0)));
    }
    if (kind == "linear") {
        const Real slope = d.at("slope").number();
        return InherentDynamics::linear(slope, check(gamma(std::abs(slope))));
    }
    if (kind == "expression") {
        const Field f = d.at("expression");
        const Expression e = f.guarded([&] {
            try {
                return Expression::parse(f.text());
            } catch (const ExpressionError& err) {
                throw std::invalid_argument(err.what());
            }
        });
        return InherentDynamics::custom([e](Real t, Real x) { return e.evaluate(t, x); },
                                        check(d.at("gamma").number()), e.text());
    }
    d.at("kind").fail("unknown dynamics kind '" + kind + "' (zero, sine, linear, expression)");
}

ControllerSpec parse_controller(const Field& c) {
    ControllerSpec spec;
    const Field fam = c.at("family");
    spec.family = fam.guarded([&] { return parse_controller_family(fam.text()); });
    spec.beta = c.number_or("beta", spec.beta);
    if (c.has("epsilon")) {
        spec.beta = c.at("epsilon").number();
    }
    spec.k = c.number_or("k", spec.k);
    spec.alpha_star = c.number_or("alpha_star", spec.alpha_star);
    if (!(spec.alpha_star > 0.0 && spec.alpha_star < 1.0)) {
        c.at("alpha_star").fail("must lie strictly inside (0, 1)");
    }
    const std::string mode = c.text_or("exponent_mode", "pair_norm");
    if (mode == "pair_norm") {
        spec.exponent_mode = ExponentMode::PairNorm;
    } else if (mode == "per_component") {
        spec.exponent_mode = ExponentMode::PerComponent;
    } else {
        c.at("exponent_mode").fail("expected pair_norm or per_component");
    }
    c.guarded([&] {
        spec.validate();
        return 0;
    });
    return spec;
}

SwitchingSchedule parse_schedule(const Field& s, std::size_t n) {
    // Without declared bounds, unweighted edges get 1 and the bounds are the
    // observed range.
    WeightBounds bounds;
    Real default_weight = 1.0;
    std::optional<std::pair<Real, Real>> seen;
    const bool declared = s.has("weight_bounds");
    if (declared) {
        const Field b = s.at("weight_bounds");
        if (b.size() != 2) {
            b.fail("expected [lower, upper]");
        }
        bounds = WeightBounds{b.item(0).number(), b.item(1).number()};
        b.guarded([&] {
            bounds.validate();
            return 0;
        });
        default_weight = bounds.lower;
    }
    const Field segs = s.at("segments");
    if (segs.size() == 0) {
        segs.fail("need at least one segment");
    }
    std::vector<ScheduleSegment> out;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Field seg = segs.item(k);
        const Real duration = seg.at("duration").number();
        DirectedGraph g(n);
        const Field edges = seg.at("edges");
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const Field edge = edges.item(e);
            if (edge.size() != 2 && edge.size() != 3) {
                edge.fail("expected [from, to] or [from, to, weight] with 1-based agents");
            }
            const std::size_t j = edge.item(0).count();
            const std::size_t i = edge.item(1).count();
            const Real w = edge.size() == 3 ? edge.item(2).number() : default_weight;
            if (i == 0 || j == 0 || i > n || j > n) {
                edge.fail("agent index out of 1.." + std::to_string(n));
            }
            edge.guarded([&] { return g.add_neighbor(i - 1, j - 1, w), 0; });
            seen = seen ? std::pair{std::min(seen->first, w), std::max(seen->second, w)}
                        : std::pair{w, w};
        }
        out.push_back({duration, std::move(g)});
    }
    if (!declared && seen) {
        bounds = WeightBounds{seen->first, seen->second};
    }
    const bool repeat = s.boolean_or("repeat", true);
    Real dwell = out.front().duration;
    for (const auto& seg : out) {
        dwell = std::min(dwell, seg.duration);
    }
    dwell = s.number_or("dwell_time", dwell);
    return s.guarded([&] { return SwitchingSchedule(std::move(out), repeat, dwell, bounds); });
}

IntegratorConfig parse_integrator(const Field& f) {
    IntegratorConfig cfg;
    cfg.dt = f.number_or("dt", cfg.dt);
    cfg.horizon = f.number_or("horizon", cfg.horizon);
    cfg.consensus_tol = f.number_or("consensus_tol", cfg.consensus_tol);
    cfg.record_controls = f.boolean_or("record_controls", false);
    for (const char* key : {"dt", "horizon", "consensus_tol"}) {
        if (f.has(key) && !(f.at(key).number() > 0.0)) {
            f.at(key).fail("must be positive");
        }
    }
    if (f.has("scheme")) {
        const Field s = f.at("scheme");
        cfg.scheme = s.guarded([&] { return parse_scheme(s.text()); });
    }
    f.guarded([&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

AnalysisSettings parse_analysis(const Field& f) {
    AnalysisSettings a;
    a.settling_tol = f.number_or("settling_tol", a.settling_tol);
    if (!(a.settling_tol > 0.0)) {
        f.at("settling_tol").fail("must be positive");
    }
    a.lipschitz_audit = f.boolean_or("lipschitz_audit", a.lipschitz_audit);
    if (f.has("lipschitz_domain")) {
        const Field d = f.at("lipschitz_domain");
        if (d.size() != 2 || !(d.item(1).number() > d.item(0).number())) {
            d.fail("expected [lo, hi] with lo < hi");
        }
        a.lipschitz_lo = d.item(0).number();
        a.lipschitz_hi = d.item(1).number();
    }
    if (f.has("lipschitz_samples")) {
        a.lipschitz_samples = f.at("lipschitz_samples").count();
        if (a.lipschitz_samples < 2) {
            f.at("lipschitz_samples").fail("need at least 2 samples");
        }
    }
    a.slack.epsilon1 = f.number_or("epsilon1", a.slack.epsilon1);
    a.slack.epsilon2 = f.number_or("epsilon2", a.slack.epsilon2);
    if (!(a.slack.epsilon1 > 0.0)) {
        f.at("epsilon1").fail("must be positive");
    }
    if (!(a.slack.epsilon2 > 0.0)) {
        f.at("epsilon2").fail("must be positive");
    }
    if (f.has("q_paper")) {
        a.q_paper = f.at("q_paper").number();
    }
    return a;
}

CompareOptions parse_comparison(const Field& f, const AnalysisSettings& analysis) {
    CompareOptions o;
    o.epsilon1 = analysis.slack.epsilon1;
    if (f.has("gamma_hat")) {
        o.gamma_hat = f.at("gamma_hat").number();
        if (!(*o.gamma_hat >= 0.0)) {
            f.at("gamma_hat").fail("must be nonnegative");
        }
    }
    if (f.has("beta")) {
        o.beta = f.at("beta").number();
        if (!(*o.beta >= 0.0)) {
            f.at("beta").fail("must be nonnegative");
        }
    }
    o.merge_tol = f.number_or("merge_tol", o.merge_tol);
    if (!(o.merge_tol > 0.0)) {
        f.at("merge_tol").fail("must be positive");
    }
    o.reanchor = f.boolean_or("reanchor", false);
    o.dominance_tol = f.number_or("dominance_tol", o.dominance_tol);
    if (f.has("script")) {
        const Field s = f.at("script");
        std::vector<ComparisonSegment> segs;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const Field seg = s.item(k);
            const Field kind = seg.at("kind");
            segs.push_back({seg.at("duration").number(),
                            kind.guarded([&] { return parse_comparison_kind(kind.text()); })});
        }
        const bool repeat = f.boolean_or("script_repeat", true);
        o.script = s.guarded([&] { return ComparisonScript::fixed(std::move(segs), repeat); });
    }
    return o;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    const Field root(doc, "");
    if (!doc.is_object()) {
        throw ConfigError("<document>", "expected a JSON object at top level");
    }

    ScenarioConfig cfg;
    cfg.r0 = parse_initial(root.at("agents"));
    cfg.dynamics = parse_dynamics(root.at("dynamics"));
    cfg.controller = parse_controller(root.at("controller"));
    cfg.schedule = parse_schedule(root.at("schedule"), cfg.r0.rows());
    cfg.integrator = root.has("integrator") ? parse_integrator(root.at("integrator")) : IntegratorConfig{};
    if (root.has("analysis")) {
        cfg.analysis = parse_analysis(root.at("analysis"));
    }
    if (root.has("comparison")) {
        cfg.comparison = parse_comparison(root.at("comparison"), cfg.analysis);
    }
    if (root.has("seed")) {
        cfg.seed = root.at("seed").count();
    }

    // Cross-checks that need more than one section.
    if (cfg.integrator.dt > cfg.sched().shortest_segment() * (1.0 + 1e-12)) {
        throw ConfigError("integrator.dt", "exceeds the shortest schedule segment");
    }
    if (!cfg.sched().repeats() &&
        cfg.integrator.horizon > cfg.sched().period() * (1.0 + 1e-12)) {
        throw ConfigError("integrator.horizon", "runs past the end of a non-repeating schedule");
    }
    if (cfg.comparison && cfg.r0.cols() != 1) {
        throw ConfigError("comparison", "comparison runs need m = 1");
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("<file>", "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace ftcons
