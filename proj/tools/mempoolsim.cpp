#include "mempoolsim/config.hpp"
#include "mempoolsim/errors.hpp"
#include "mempoolsim/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace ms = mempoolsim;

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "Configuration file (defaults apply when omitted)");
    cmd->add_option("--out", args.out, "Output directory (overrides experiment.output_dir)");
    cmd->add_option("--seed", args.seed, "Base seed (overrides the config)");
}

ms::ExperimentSpec resolve(const CommonArgs& args) {
    ms::ExperimentSpec spec = args.config.empty() ? ms::parse_config("") : ms::load_config(args.config);
    if (args.seed) spec.base.seed = *args.seed;
    if (!args.out.empty()) spec.output_dir = args.out;
    spec.validate();
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator of a Bitcoin mempool under fee-driven block packing"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CommonArgs sweep_args;
    CommonArgs game_args;
    CommonArgs validate_args;
    std::string mode;
    std::string matrix;
    std::string trace;

    CLI::App* simulate = app.add_subcommand("simulate", "Single run of the [simulation] settings");
    add_common(simulate, sim_args);

    CLI::App* sweep = app.add_subcommand("sweep", "Capacity x strategy grid");
    add_common(sweep, sweep_args);

    CLI::App* game = app.add_subcommand("game", "Payoff matrices and equilibria");
    add_common(game, game_args);
    game->add_option("--mode", mode, "two_miner or one_vs_four (overrides game.mode)");
    game->add_option("--matrix", matrix, "Analyze an existing payoff matrix CSV instead of simulating");

    CLI::App* validate = app.add_subcommand("validate", "Trace-driven against synthetic mean waits");
    add_common(validate, validate_args);
    validate->add_option("--trace", trace, "Trace CSV (arrival_time_s,fee_satoshi,size_bytes)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) {
            const ms::ExperimentSpec spec = resolve(sim_args);
            const ms::SimResult result = ms::cmd_simulate(spec, spec.output_dir);
            std::cout << "transactions=" << result.transactions.size()
                      << " included=" << result.included_count() << " blocks=" << result.blocks.size()
                      << " out=" << spec.output_dir << "\n";
        } else if (sweep->parsed()) {
            const ms::ExperimentSpec spec = resolve(sweep_args);
            const ms::SweepReport report = ms::cmd_sweep(spec, spec.output_dir);
            std::cout << "cells=" << report.summary.size() << " out=" << spec.output_dir << "\n";
        } else if (game->parsed()) {
            if (!matrix.empty()) {
                const std::string out = game_args.out.empty() ? std::string(".") : game_args.out;
                const ms::EquilibriumReport report = ms::cmd_analyze_matrix(matrix, out);
                std::cout << "pure_nash=" << report.pure_nash.size() << " out=" << out << "\n";
            } else {
                const ms::ExperimentSpec spec = resolve(game_args);
                const ms::GameMode game_mode = mode.empty() ? spec.game.mode : ms::parse_game_mode(mode);
                const auto reports = ms::cmd_game(spec, game_mode, spec.output_dir);
                for (const ms::GameReport& r : reports)
                    std::cout << "capacity=" << r.capacity << " pure_nash=" << r.equilibrium.pure_nash.size()
                              << "\n";
            }
        } else if (validate->parsed()) {
            const ms::ExperimentSpec spec = resolve(validate_args);
            const auto rows = ms::cmd_validate(trace, spec, spec.output_dir);
            std::cout << "capacities=" << rows.size() << " out=" << spec.output_dir << "\n";
        }
    } catch (const ms::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ms::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ms::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
