#pragma once

#include "mempoolsim/mempool.hpp"
#include "mempoolsim/random_stream.hpp"
#include "mempoolsim/stochastic.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mempoolsim {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr std::uint64_t kMegabyte = 1'000'000;

/// One experiment run.
struct SimConfig {
    IntensityFunction intensity;
    AttributeModel attributes;
    double mu = 1.0 / 600.0;               // blocks per second
    std::uint64_t capacity = kMegabyte;    // bytes per block
    Strategy strategy = Strategy::FeePerByte;
    double horizon = 30.0 * kSecondsPerDay;
    double warmup = 3.0 * kSecondsPerDay;  // summaries ignore records before this
    std::uint64_t seed = 1;

    static double default_warmup(double horizon) { return 0.1 * horizon; }

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

struct Block {
    BlockId block_id = 0;
    double creation_time = 0.0;
    std::vector<TxId> tx_ids;
    std::uint64_t used_bytes = 0;
    std::uint64_t capacity = 0;
    double fill_rate = 0.0;
    std::int64_t collected_fee = 0;
    std::uint32_t miner_id = 0;

    bool operator==(const Block&) const = default;
};

/// Every generated transaction (indexed by id; pending ones have no
/// inclusion) and every produced block.
struct SimResult {
    std::vector<Transaction> transactions;
    std::vector<Block> blocks;
    SimConfig config_echo;

    std::size_t included_count() const;
    std::size_t pending_count() const { return transactions.size() - included_count(); }

    bool operator==(const SimResult&) const = default;
};

struct TraceRow {
    double arrival_time = 0.0;  // seconds
    std::int64_t fee = 0;       // satoshi
    std::uint32_t size = 0;     // bytes

    bool operator==(const TraceRow&) const = default;
};

/// Recorded arrivals that replace the synthetic arrival and attribute
/// processes.
struct TraceArrivals {
    std::vector<TraceRow> rows;

    /// Throws ParseError naming the 1-based data row on the first violation.
    void validate() const;
};

/// Why `row` is invalid after `previous` (nullptr for the first row), or an
/// empty string if it is fine.
std::string trace_row_problem(const TraceRow* previous, const TraceRow& row);

/// Exponential inter-block time with mean 1/mu.
double sample_block_interval(double mu, RandomStream& rng);

/// The miner producing a block and the strategy it packs with.
struct BlockProducer {
    std::uint32_t miner_id = 0;
    Strategy strategy = Strategy::FeePerByte;
};

/// Chooses the producer of the next block.
using ProducerPicker = std::function<BlockProducer()>;

/// Yields arrivals in time order; std::nullopt when exhausted.
struct ArrivalSource {
    std::function<std::optional<TraceRow>()> next;
    std::size_t size_hint = 0;
};

/// Shared event loop. Arrivals are inserted into the backlog in time order;
/// block events (spaced by sample_block_interval on the block sub-stream of
/// config.seed) pick a producer, select under its strategy and remove the
/// selection. An arrival at the same instant as a block is inserted first.
/// Arrivals after config.horizon are not consumed.
SimResult run_event_loop(const ArrivalSource& arrivals, const SimConfig& config,
                         const ProducerPicker& pick_producer,
                         std::span<const Strategy> strategies_in_use);

/// Synthetic arrivals from the config's intensity and attribute model.
ArrivalSource synthetic_arrivals(const SimConfig& config);

SimResult run_simulation(const SimConfig& config);

/// Same loop with arrivals (time, fee, size) taken from a trace. The block
/// process still comes from config.seed.
SimResult run_trace_simulation(const TraceArrivals& trace, const SimConfig& config);

/// Verifies the cross-record invariants of a result; throws ConsistencyError.
void check_result(const SimResult& result);

}  // namespace mempoolsim
