#pragma once

#include "mempoolsim/engine.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mempoolsim {

struct MinerProfile {
    std::uint32_t miner_id = 0;
    Strategy strategy = Strategy::FeePerByte;
    double win_probability = 1.0;
};

/// Rejects empty lists, ids other than 0..n-1 in order, probabilities
/// outside [0, 1] or not summing to 1 (within 1e-9).
void validate_miners(std::span<const MinerProfile> miners);

struct GameOutcome {
    std::vector<std::int64_t> per_miner_fee;  // satoshi
    std::vector<double> per_miner_share;      // of all collected fees
    std::vector<std::size_t> blocks_won;
    std::int64_t total_fee = 0;
};

/// The engine loop with a shared backlog; each block is won by a miner drawn
/// by win probability, who packs it with its own strategy. Every block is
/// accepted.
SimResult run_game_simulation(const SimConfig& config, std::span<const MinerProfile> miners);

/// Per-miner fee totals over all blocks of a run.
GameOutcome tally_game(const SimResult& result, std::size_t miner_count);

GameOutcome run_game(const SimConfig& config, std::span<const MinerProfile> miners);

struct PayoffCell {
    double p1 = 0.0;
    double p2 = 0.0;

    bool operator==(const PayoffCell&) const = default;
};

/// Two-player normal-form game. Rows are player 1's strategies, columns
/// player 2's, both drawn from the same ordered set.
struct PayoffMatrix {
    std::vector<std::string> strategies;
    std::vector<PayoffCell> cells;  // row-major

    std::size_t size() const { return strategies.size(); }
    const PayoffCell& at(std::size_t row, std::size_t col) const { return cells[row * size() + col]; }
    PayoffCell& at(std::size_t row, std::size_t col) { return cells[row * size() + col]; }

    /// Index of a strategy label; throws std::invalid_argument if unknown.
    std::size_t index_of(std::string_view strategy) const;

    /// Throws std::invalid_argument unless square, nonempty, fully populated
    /// with finite payoffs and free of duplicate labels.
    void validate() const;

    static PayoffMatrix filled(std::vector<std::string> strategies);

    bool operator==(const PayoffMatrix&) const = default;
};

enum class Player { One, Two };

/// Strictly dominant strategy of each player, if any.
struct DominantStrategies {
    std::optional<std::size_t> p1;
    std::optional<std::size_t> p2;
};

DominantStrategies find_dominant_strategies(const PayoffMatrix& matrix);

/// Cells that are mutual weak best responses, in row-major order.
std::vector<std::pair<std::size_t, std::size_t>> find_pure_nash(const PayoffMatrix& matrix);

/// Argmax of the player's payoff against the opponent's strategy; ties go
/// to the earliest strategy in the set.
std::size_t best_response(const PayoffMatrix& matrix, Player player, std::size_t opponent_strategy);
std::string best_response(const PayoffMatrix& matrix, Player player,
                          std::string_view opponent_strategy);

struct EquilibriumReport {
    DominantStrategies dominant;
    /// best_response_p1[c]: player 1's reply to column c.
    std::vector<std::size_t> best_response_p1;
    /// best_response_p2[r]: player 2's reply to row r.
    std::vector<std::size_t> best_response_p2;
    std::vector<std::pair<std::size_t, std::size_t>> pure_nash;
};

EquilibriumReport analyze_equilibria(const PayoffMatrix& matrix);

enum class GameMode { TwoMiner, OneVsFour };

std::string_view to_string(GameMode mode);
GameMode parse_game_mode(std::string_view name);

/// Miners for one cell: two_miner is two miners at p = 0.5; one_vs_four is
/// miner 0 on `row` plus four miners on `col`, all at p = 0.2.
std::vector<MinerProfile> cell_miners(GameMode mode, Strategy row, Strategy col);

struct PayoffOptions {
    /// Reuse the same replication seeds in every cell.
    bool common_random_numbers = false;
    /// Worker threads for independent runs; 0 picks the hardware count.
    unsigned threads = 0;
};

/// Averaged payoffs of a strategy-vs-strategy experiment, in satoshi and as
/// a fraction of the fees collected in each run. In one_vs_four mode the
/// column player's payoff is the per-member mean of the four-miner group.
struct GamePayoffs {
    PayoffMatrix satoshi;
    PayoffMatrix share;
};

GamePayoffs build_payoff_matrix(const SimConfig& config, std::span<const Strategy> strategy_set,
                                GameMode mode, std::size_t replications,
                                const PayoffOptions& options = {});

std::vector<std::string> strategy_labels(std::span<const Strategy> strategies);

}  // namespace mempoolsim
