#include "mempoolsim/game.hpp"

#include "mempoolsim/errors.hpp"
#include "mempoolsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mempoolsim {

void validate_miners(std::span<const MinerProfile> miners) {
    if (miners.empty()) throw ConfigError("miners", "at least one miner is required");
    double total = 0.0;
    for (std::size_t i = 0; i < miners.size(); ++i) {
        if (miners[i].miner_id != i) throw ConfigError("miners", "miner ids must be 0..n-1 in order");
        const double p = miners[i].win_probability;
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("win_probability", "must lie in [0, 1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("win_probability", "probabilities must sum to 1");
}

SimResult run_game_simulation(const SimConfig& config, std::span<const MinerProfile> miners) {
    validate_miners(miners);
    config.validate();

    std::vector<Strategy> in_use;
    for (const MinerProfile& m : miners)
        if (std::find(in_use.begin(), in_use.end(), m.strategy) == in_use.end())
            in_use.push_back(m.strategy);

    auto miner_rng = substream(config.seed, StreamId::MinerDraws);
    std::vector<MinerProfile> roster(miners.begin(), miners.end());
    const ProducerPicker pick = [&miner_rng, &roster]() {
        const double u = miner_rng.uniform();
        double cumulative = 0.0;
        for (const MinerProfile& m : roster) {
            cumulative += m.win_probability;
            if (u < cumulative) return BlockProducer{m.miner_id, m.strategy};
        }
        // Rounding left the cumulative sum just below 1.
        const auto last = std::find_if(roster.rbegin(), roster.rend(),
                                       [](const MinerProfile& m) { return m.win_probability > 0.0; });
        return BlockProducer{last->miner_id, last->strategy};
    };
    return run_event_loop(synthetic_arrivals(config), config, pick, in_use);
}

GameOutcome tally_game(const SimResult& result, std::size_t miner_count) {
    GameOutcome out;
    out.per_miner_fee.assign(miner_count, 0);
    out.blocks_won.assign(miner_count, 0);
    for (const Block& block : result.blocks) {
        if (block.miner_id >= miner_count)
            throw ConsistencyError("block mined by unknown miner " + std::to_string(block.miner_id));
        out.per_miner_fee[block.miner_id] += block.collected_fee;
        ++out.blocks_won[block.miner_id];
        out.total_fee += block.collected_fee;
    }
    out.per_miner_share.assign(miner_count, 0.0);
    if (out.total_fee > 0)
        for (std::size_t i = 0; i < miner_count; ++i)
            out.per_miner_share[i] = static_cast<double>(out.per_miner_fee[i]) /
                                     static_cast<double>(out.total_fee);
    return out;
}

GameOutcome run_game(const SimConfig& config, std::span<const MinerProfile> miners) {
    return tally_game(run_game_simulation(config, miners), miners.size());
}

std::size_t PayoffMatrix::index_of(std::string_view strategy) const {
    const auto it = std::find(strategies.begin(), strategies.end(), strategy);
    if (it == strategies.end())
        throw std::invalid_argument("strategy '" + std::string(strategy) + "' is not in the matrix");
    return static_cast<std::size_t>(it - strategies.begin());
}

void PayoffMatrix::validate() const {
    if (strategies.empty()) throw std::invalid_argument("payoff matrix has no strategies");
    if (cells.size() != size() * size()) throw std::invalid_argument("payoff matrix is not square");
    if (std::set<std::string>(strategies.begin(), strategies.end()).size() != size())
        throw std::invalid_argument("duplicate strategy label");
    for (const PayoffCell& c : cells)
        if (!std::isfinite(c.p1) || !std::isfinite(c.p2))
            throw std::invalid_argument("payoff matrix has a non-finite payoff");
}

PayoffMatrix PayoffMatrix::filled(std::vector<std::string> strategies) {
    PayoffMatrix m;
    m.cells.assign(strategies.size() * strategies.size(), PayoffCell{});
    m.strategies = std::move(strategies);
    return m;
}

namespace {

double payoff(const PayoffMatrix& m, Player player, std::size_t own, std::size_t other) {
    return player == Player::One ? m.at(own, other).p1 : m.at(other, own).p2;
}

std::optional<std::size_t> strictly_dominant(const PayoffMatrix& m, Player player) {
    const std::size_t n = m.size();
    for (std::size_t s = 0; s < n; ++s) {
        bool dominant = true;
        for (std::size_t other = 0; other < n && dominant; ++other)
            for (std::size_t alt = 0; alt < n && dominant; ++alt)
                if (alt != s && !(payoff(m, player, s, other) > payoff(m, player, alt, other)))
                    dominant = false;
        if (dominant) return s;
    }
    return std::nullopt;
}

}  // namespace

DominantStrategies find_dominant_strategies(const PayoffMatrix& matrix) {
    matrix.validate();
    return {strictly_dominant(matrix, Player::One), strictly_dominant(matrix, Player::Two)};
}

std::size_t best_response(const PayoffMatrix& matrix, Player player, std::size_t opponent_strategy) {
    matrix.validate();
    if (opponent_strategy >= matrix.size())
        throw std::invalid_argument("opponent strategy index out of range");
    std::size_t best = 0;
    for (std::size_t s = 1; s < matrix.size(); ++s)
        if (payoff(matrix, player, s, opponent_strategy) >
            payoff(matrix, player, best, opponent_strategy))
            best = s;
    return best;
}

std::string best_response(const PayoffMatrix& matrix, Player player,
                          std::string_view opponent_strategy) {
    return matrix.strategies[best_response(matrix, player, matrix.index_of(opponent_strategy))];
}

std::vector<std::pair<std::size_t, std::size_t>> find_pure_nash(const PayoffMatrix& matrix) {
    matrix.validate();
    const std::size_t n = matrix.size();
    std::vector<double> col_max_p1(n, -INFINITY);
    std::vector<double> row_max_p2(n, -INFINITY);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            col_max_p1[c] = std::max(col_max_p1[c], matrix.at(r, c).p1);
            row_max_p2[r] = std::max(row_max_p2[r], matrix.at(r, c).p2);
        }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (matrix.at(r, c).p1 >= col_max_p1[c] && matrix.at(r, c).p2 >= row_max_p2[r])
                out.emplace_back(r, c);
    return out;
}

EquilibriumReport analyze_equilibria(const PayoffMatrix& matrix) {
    EquilibriumReport report;
    report.dominant = find_dominant_strategies(matrix);
    for (std::size_t s = 0; s < matrix.size(); ++s) {
        report.best_response_p1.push_back(best_response(matrix, Player::One, s));
        report.best_response_p2.push_back(best_response(matrix, Player::Two, s));
    }
    report.pure_nash = find_pure_nash(matrix);
    return report;
}

std::string_view to_string(GameMode mode) {
    return mode == GameMode::TwoMiner ? "two_miner" : "one_vs_four";
}

GameMode parse_game_mode(std::string_view name) {
    if (name == "two_miner") return GameMode::TwoMiner;
    if (name == "one_vs_four") return GameMode::OneVsFour;
    throw std::invalid_argument("unknown game mode '" + std::string(name) + "'");
}

std::vector<MinerProfile> cell_miners(GameMode mode, Strategy row, Strategy col) {
    if (mode == GameMode::TwoMiner) return {{0, row, 0.5}, {1, col, 0.5}};
    std::vector<MinerProfile> miners{{0, row, 0.2}};
    for (std::uint32_t id = 1; id <= 4; ++id) miners.push_back({id, col, 0.2});
    return miners;
}

std::vector<std::string> strategy_labels(std::span<const Strategy> strategies) {
    std::vector<std::string> labels;
    for (Strategy s : strategies) labels.emplace_back(to_string(s));
    return labels;
}

GamePayoffs build_payoff_matrix(const SimConfig& config, std::span<const Strategy> strategy_set,
                                GameMode mode, std::size_t replications,
                                const PayoffOptions& options) {
    if (replications < 1) throw ConfigError("replications", "must be >= 1");
    if (strategy_set.empty()) throw ConfigError("strategies", "must be nonempty");
    config.validate();

    const std::size_t n = strategy_set.size();
    const std::size_t runs = n * n * replications;
    std::vector<PayoffCell> satoshi(runs);
    std::vector<PayoffCell> share(runs);

    parallel_for(runs, options.threads, [&](std::size_t run) {
        const std::size_t cell = run / replications;
        const std::size_t rep = run % replications;
        const auto miners = cell_miners(mode, strategy_set[cell / n], strategy_set[cell % n]);
        SimConfig cfg = config;
        cfg.seed = derive_run_seed(config.seed, options.common_random_numbers ? 0 : cell, rep);
        const GameOutcome outcome = run_game(cfg, miners);

        double group_fee = 0.0;
        double group_share = 0.0;
        for (std::size_t m = 1; m < miners.size(); ++m) {
            group_fee += static_cast<double>(outcome.per_miner_fee[m]);
            group_share += outcome.per_miner_share[m];
        }
        const double members = static_cast<double>(miners.size() - 1);
        satoshi[run] = {static_cast<double>(outcome.per_miner_fee[0]), group_fee / members};
        share[run] = {outcome.per_miner_share[0], group_share / members};
    });

    GamePayoffs out{PayoffMatrix::filled(strategy_labels(strategy_set)),
                    PayoffMatrix::filled(strategy_labels(strategy_set))};
    for (std::size_t cell = 0; cell < n * n; ++cell) {
        PayoffCell sat_sum;
        PayoffCell share_sum;
        for (std::size_t rep = 0; rep < replications; ++rep) {
            const std::size_t run = cell * replications + rep;
            sat_sum.p1 += satoshi[run].p1;
            sat_sum.p2 += satoshi[run].p2;
            share_sum.p1 += share[run].p1;
            share_sum.p2 += share[run].p2;
        }
        const double reps = static_cast<double>(replications);
        out.satoshi.cells[cell] = {sat_sum.p1 / reps, sat_sum.p2 / reps};
        out.share.cells[cell] = {share_sum.p1 / reps, share_sum.p2 / reps};
    }
    return out;
}

}  // namespace mempoolsim
