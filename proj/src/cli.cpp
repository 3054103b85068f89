#include "ftcons/cli.hpp"

#include "ftcons/analysis.hpp"
#include "ftcons/comparison.hpp"
#include "ftcons/expression.hpp"
#include "ftcons/trace_io.hpp"

#include <future>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ftcons {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& dir, const char* name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return f;
}

std::string opt_text(const std::optional<Real>& v) { return v ? format_real(*v) : "none"; }

// Shared error funnel: every subcommand reports failures the same way.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const IntegrationError& e) {
        err << "integration error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

GainCertificate certificate_for(const ScenarioConfig& cfg) {
    return check_gain(cfg.controller, cfg.dynamics, cfg.sched(), cfg.analysis.slack,
                      cfg.analysis.q_paper);
}

std::optional<Real> bound_if_certified(const ScenarioConfig& cfg, const Trace& trace,
                                       const GainCertificate& cert) {
    // The decay bound exists only for the variable-exponent law with a certified beta.
    if (!cert.applicable || !cert.satisfied ||
        cfg.controller.family != ControllerFamily::VariableExponent || trace.dims() != 1) {
        return std::nullopt;
    }
    const auto tbar = find_tbar_index(trace);
    if (!tbar) {
        return std::nullopt;
    }
    const Real g0 = g_tilde_series(trace, cfg.controller.alpha_star)[*tbar];
    const BoundParams p{cfg.controller.alpha_star, cfg.sched().bounds().lower, cert.q_value,
                        cfg.analysis.slack.epsilon2, g0};
    return trace.times[*tbar] + settling_bound(p);
}

std::string lipschitz_text(const ScenarioConfig& cfg, std::uint64_t seed) {
    if (!cfg.analysis.lipschitz_audit) {
        return "lipschitz_audit = off\n";
    }
    const auto rep = lipschitz_audit(cfg.dynamics, cfg.analysis.lipschitz_lo,
                                     cfg.analysis.lipschitz_hi, cfg.analysis.lipschitz_samples,
                                     seed, cfg.integrator.horizon);
    std::ostringstream os;
    os << "lipschitz_gamma = " << format_real(rep.gamma) << '\n'
       << "lipschitz_max_ratio = " << format_real(rep.max_ratio) << '\n'
       << "lipschitz_pairs = " << rep.pairs << '\n'
       << "lipschitz_audit = " << (rep.pass ? "pass" : "fail") << '\n';
    return os.str();
}

void write_series(std::ostream& os, const char* header, const std::vector<Real>& t,
                  const std::vector<Real>& v, std::size_t offset = 0) {
    os << header << '\n';
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << format_real(t[offset + k]) << ',' << format_real(v[k]) << '\n';
    }
}

}  // namespace

int cmd_simulate(const fs::path& config, const fs::path& out_dir, const RunOptions& opts,
                 std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig cfg = load_scenario(config);
        const std::uint64_t seed = opts.seed.value_or(cfg.seed);
        const Trace trace =
            simulate(cfg.controller, cfg.dynamics, cfg.sched(), cfg.r0, cfg.integrator);
        const GainCertificate cert = certificate_for(cfg);
        const ConvergenceReport rep = summarize(trace, cfg.sched(), cfg.analysis.settling_tol,
                                                bound_if_certified(cfg, trace, cert));

        auto csv = open_out(out_dir, "trace.csv");
        write_trace_csv(csv, trace);
        const std::string report = format_report(rep) + lipschitz_text(cfg, seed);
        open_out(out_dir, "report.txt") << report;
        open_out(out_dir, "certificate.txt") << format_certificate(cert);
        out << report;
        return kExitOk;
    });
}

int cmd_check_gains(const fs::path& config, const RunOptions& opts, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig cfg = load_scenario(config);
        const GainCertificate cert = certificate_for(cfg);
        out << format_certificate(cert);
        if (!cert.applicable) {
            return kExitOk;
        }
        const bool ok = cert.satisfied_under(opts.q_convention);
        out << "convention = " << (opts.q_convention == QConvention::Tight ? "tight" : "paper")
            << '\n'
            << "verdict = " << (ok ? "satisfied" : "unsatisfied") << '\n';
        return ok ? kExitOk : kExitVerdict;
    });
}

int cmd_compare(const fs::path& config, const fs::path& out_dir, const RunOptions&,
                std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig cfg = load_scenario(config);
        if (!cfg.comparison) {
            throw ConfigError("comparison", "missing section, required by compare");
        }
        const CompareResult res = run_comparison(cfg.controller, cfg.dynamics, cfg.sched(), cfg.r0,
                                                 cfg.integrator, *cfg.comparison);

        auto p = open_out(out_dir, "primary.csv");
        write_trace_csv(p, res.primary);
        auto c = open_out(out_dir, "comparison.csv");
        write_trace_csv(c, res.comparison);
        auto g = open_out(out_dir, "g_tilde.csv");
        write_series(g, "t,G_tilde", res.comparison.times, res.g_tilde);
        auto b = open_out(out_dir, "bound.csv");
        write_series(b, "t,mu", res.comparison.times, res.mu, res.tbar_index.value_or(0));

        std::ostringstream os;
        os << "gamma_hat = " << format_real(res.params.gamma_hat) << '\n'
           << "beta = " << format_real(res.params.beta) << '\n'
           << "a_lower = " << format_real(res.params.a_lower) << '\n'
           << "reanchor = " << (cfg.comparison->reanchor ? "true" : "false") << '\n'
           << "dominance_tol = " << format_real(res.dominance.tol) << '\n'
           << "samples = " << res.dominance.samples << '\n'
           << "max_excess = " << format_real(res.dominance.max_excess) << '\n'
           << "violations = " << res.dominance.violations.size() << '\n'
           << "G_tilde_monotone = " << (res.g_tilde_monotone ? "true" : "false") << '\n'
           << "t_bar = "
           << (res.tbar_index ? format_real(res.comparison.times[*res.tbar_index]) : "none") << '\n'
           << "settling_bound = " << opt_text(res.settling_bound) << '\n';
        const std::string summary = os.str();
        auto d = open_out(out_dir, "dominance.txt");
        d << summary << "t,G,F\n";
        for (const auto& v : res.dominance.violations) {
            d << format_real(v.t) << ',' << format_real(v.g) << ',' << format_real(v.f) << '\n';
        }
        out << summary;
        return res.dominance.holds() ? kExitOk : kExitVerdict;
    });
}

void apply_sweep_value(ScenarioConfig& cfg, const std::string& parameter, Real value) {
    if (parameter == "beta") {
        cfg.controller.beta = value;
    } else if (parameter == "k") {
        cfg.controller.k = value;
    } else if (parameter == "alpha_star") {
        cfg.controller.alpha_star = value;
    } else if (parameter == "dt") {
        cfg.integrator.dt = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + parameter +
                                    "' (beta, k, alpha_star, dt)");
    }
    cfg.controller.validate();
    cfg.integrator.validate();
}

int cmd_sweep(const fs::path& config, const std::string& parameter,
              const std::vector<std::string>& values, const fs::path& out_dir, const RunOptions&,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (values.empty()) {
            throw std::invalid_argument("sweep needs at least one value");
        }
        const ScenarioConfig base = load_scenario(config);
        std::vector<ScenarioConfig> cells;
        for (const auto& text : values) {
            ScenarioConfig cfg = base;
            apply_sweep_value(cfg, parameter, evaluate_constant(text));
            cells.push_back(std::move(cfg));
        }

        struct Row {
            std::optional<Real> settling;
            Real final_g;
            std::optional<Real> snap;
        };
        std::vector<std::future<Row>> jobs;
        for (const auto& cfg : cells) {
            jobs.push_back(std::async(std::launch::async, [&cfg] {
                const Trace tr =
                    simulate(cfg.controller, cfg.dynamics, cfg.sched(), cfg.r0, cfg.integrator);
                return Row{settling_time(tr, cfg.analysis.settling_tol), tr.disagreement.back(),
                           tr.first_event(EventKind::ConsensusSnap)};
            }));
        }

        std::ostringstream table;
        table << parameter << ",settling_time,final_G,snap_time\n";
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            const Row r = jobs[k].get();
            table << values[k] << ',' << opt_text(r.settling) << ',' << format_real(r.final_g)
                  << ',' << opt_text(r.snap) << '\n';
        }
        open_out(out_dir, "sweep.csv") << table.str();
        out << table.str();
        return kExitOk;
    });
}

int cmd_counterexample(const fs::path& out_dir, std::size_t cycles, std::ostream& out,
                       std::ostream& err) {
    return guarded(err, [&] {
        const CounterexampleScenario sc = ring_counterexample(cycles);
        IntegratorConfig cfg;
        cfg.horizon = sc.schedule.period();
        const Trace tr = simulate(sc.spec, sc.dynamics, sc.schedule, sc.r0, cfg);

        Real worst = 0.0;
        for (Real g : tr.disagreement) {
            worst = std::max(worst, std::abs(g - 2.0));
        }
        std::ostringstream os;
        os << "cycles = " << sc.cycles << '\n' << "segment_durations =";
        for (const auto& seg : sc.schedule.segments()) {
            os << ' ' << format_real(seg.duration);
        }
        os << "\nsegment_spanning_tree =";
        for (bool b : spanning_tree_audit(sc.schedule)) {
            os << ' ' << (b ? "true" : "false");
        }
        os << "\ncycle_union_spanning_tree = "
           << (has_directed_spanning_tree(graph_union(sc.cycle)) ? "true" : "false") << '\n'
           << "horizon = " << format_real(cfg.horizon) << '\n'
           << "max_abs_G_minus_2 = " << format_real(worst) << '\n'
           << "settling_time_0.1 = " << opt_text(settling_time(tr, 0.1)) << '\n';
        auto csv = open_out(out_dir, "trace.csv");
        write_trace_csv(csv, tr);
        open_out(out_dir, "report.txt") << os.str();
        out << os.str();
        return kExitOk;
    });
}

}  // namespace ftcons
