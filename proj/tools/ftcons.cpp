#include "ftcons/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace ftcons;

    CLI::App app{"Finite-time consensus simulator for switched directed networks"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::string q_name = "tight";
    std::uint64_t seed = 0;
    std::string parameter;
    std::vector<std::string> values;
    std::size_t cycles = 3;

    const auto common = [&](CLI::App* sub, bool writes) {
        sub->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
        if (writes) {
            sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        }
        sub->add_option("--q-convention", q_name, "chain constant convention")
            ->check(CLI::IsMember({"tight", "paper"}))
            ->capture_default_str();
        sub->add_option("--seed", seed, "seed for sampled audits (overrides the config)");
    };

    auto* sim = app.add_subcommand("simulate", "run the closed loop and report convergence");
    common(sim, true);
    auto* gains = app.add_subcommand("check-gains", "check the gain condition");
    common(gains, false);
    auto* cmp = app.add_subcommand("compare", "audit dominance by the comparison system");
    common(cmp, true);
    auto* sweep = app.add_subcommand("sweep", "settling time across parameter values");
    common(sweep, true);
    sweep->add_option("--param", parameter, "beta, k, alpha_star or dt")->required();
    sweep->add_option("--values", values, "values to try (comma separated)")
        ->required()
        ->delimiter(',');
    auto* cex = app.add_subcommand("counterexample", "jointly connected ring without consensus");
    cex->add_option("--out", out_dir, "output directory")->capture_default_str();
    cex->add_option("--cycles", cycles, "ring cycles to simulate")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    RunOptions opts;
    opts.q_convention = q_name == "paper" ? QConvention::Paper : QConvention::Tight;
    if (app.got_subcommand("simulate") ? sim->count("--seed") > 0
        : app.got_subcommand("compare") ? cmp->count("--seed") > 0
        : app.got_subcommand("sweep")   ? sweep->count("--seed") > 0
                                        : false) {
        opts.seed = seed;
    }

    if (*sim) {
        return cmd_simulate(config, out_dir, opts, std::cout, std::cerr);
    }
    if (*gains) {
        return cmd_check_gains(config, opts, std::cout, std::cerr);
    }
    if (*cmp) {
        return cmd_compare(config, out_dir, opts, std::cout, std::cerr);
    }
    if (*sweep) {
        return cmd_sweep(config, parameter, values, out_dir, opts, std::cout, std::cerr);
    }
    return cmd_counterexample(out_dir, cycles, std::cout, std::cerr);
}
