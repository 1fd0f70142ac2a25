#include "mempoolsim/engine.hpp"

#include "mempoolsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace mempoolsim {

void SimConfig::validate() const {
    intensity.validate();
    attributes.validate();
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu", "must be > 0");
    if (capacity == 0) throw ConfigError("capacity", "must be > 0");
    if (capacity < attributes.min_size)
        throw ConfigError("capacity", "must be >= attributes.min_size");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon", "must be > 0");
    if (!(warmup >= 0.0) || !(warmup < horizon))
        throw ConfigError("warmup", "must satisfy 0 <= warmup < horizon");
}

std::size_t SimResult::included_count() const {
    return static_cast<std::size_t>(std::count_if(
        transactions.begin(), transactions.end(), [](const Transaction& tx) { return tx.included(); }));
}

std::string trace_row_problem(const TraceRow* previous, const TraceRow& row) {
    if (!(row.arrival_time >= 0.0) || !std::isfinite(row.arrival_time))
        return "arrival_time must be a finite value >= 0";
    if (previous != nullptr && row.arrival_time < previous->arrival_time)
        return "arrival_time decreases";
    if (row.fee <= 0) return "fee must be > 0";
    if (row.size < 1) return "size must be >= 1";
    return {};
}

void TraceArrivals::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string problem = trace_row_problem(i > 0 ? &rows[i - 1] : nullptr, rows[i]);
        if (!problem.empty()) throw ParseError(0, "trace row " + std::to_string(i + 1) + ": " + problem);
    }
}

double sample_block_interval(double mu, RandomStream& rng) {
    return rng.exponential(mu);
}

SimResult run_event_loop(const ArrivalSource& arrivals, const SimConfig& config,
                         const ProducerPicker& pick_producer,
                         std::span<const Strategy> strategies_in_use) {
    config.validate();

    SimResult result;
    result.config_echo = config;
    Backlog backlog(strategies_in_use);
    RandomStream block_rng = substream(config.seed, StreamId::BlockIntervals);

    result.transactions.reserve(arrivals.size_hint);
    std::optional<TraceRow> next_arrival = arrivals.next();
    double next_block = sample_block_interval(config.mu, block_rng);

    const auto admit = [&](const TraceRow& row) {
        Transaction tx;
        tx.id = result.transactions.size();
        tx.arrival_time = row.arrival_time;
        tx.size = row.size;
        tx.fee = row.fee;
        backlog.insert(tx);
        result.transactions.push_back(tx);
    };

    while (true) {
        if (next_arrival && next_arrival->arrival_time <= config.horizon &&
            next_arrival->arrival_time <= next_block) {
            admit(*next_arrival);
            next_arrival = arrivals.next();
            continue;
        }
        if (next_block > config.horizon) break;

        const BlockProducer producer = pick_producer();
        const std::vector<Transaction> selected =
            backlog.select_block(config.capacity, producer.strategy);

        Block block;
        block.block_id = result.blocks.size();
        block.creation_time = next_block;
        block.capacity = config.capacity;
        block.miner_id = producer.miner_id;
        block.tx_ids.reserve(selected.size());
        for (const Transaction& tx : selected) {
            block.tx_ids.push_back(tx.id);
            block.used_bytes += tx.size;
            block.collected_fee += tx.fee;
            result.transactions[tx.id].inclusion =
                Inclusion{next_block - tx.arrival_time, block.block_id};
        }
        block.fill_rate =
            static_cast<double>(block.used_bytes) / static_cast<double>(config.capacity);
        backlog.remove_all(selected);
        result.blocks.push_back(std::move(block));

        next_block += sample_block_interval(config.mu, block_rng);
    }
    return result;
}

ArrivalSource synthetic_arrivals(const SimConfig& config) {
    RandomStream arrival_rng = substream(config.seed, StreamId::Arrivals);
    auto times = std::make_shared<std::vector<double>>(
        sample_arrival_times(config.intensity, config.horizon, arrival_rng));
    auto attribute_rng =
        std::make_shared<RandomStream>(substream(config.seed, StreamId::Attributes));
    const std::size_t count = times->size();
    return {[times, attribute_rng, model = config.attributes,
             next = std::size_t{0}]() mutable -> std::optional<TraceRow> {
                if (next >= times->size()) return std::nullopt;
                const AttributePair attrs = sample_attribute_pair(model, *attribute_rng);
                return TraceRow{(*times)[next++], attrs.fee, attrs.size};
            },
            count};
}

SimResult run_simulation(const SimConfig& config) {
    config.validate();
    const Strategy strategy = config.strategy;
    const std::array<Strategy, 1> in_use = {strategy};
    return run_event_loop(
        synthetic_arrivals(config), config,
        [strategy] { return BlockProducer{0, strategy}; }, in_use);
}

SimResult run_trace_simulation(const TraceArrivals& trace, const SimConfig& config) {
    trace.validate();
    config.validate();
    const Strategy strategy = config.strategy;
    const std::array<Strategy, 1> in_use = {strategy};
    ArrivalSource source{[&trace, next = std::size_t{0}]() mutable -> std::optional<TraceRow> {
                             if (next >= trace.rows.size()) return std::nullopt;
                             return trace.rows[next++];
                         },
                         trace.rows.size()};
    return run_event_loop(source, config, [strategy] { return BlockProducer{0, strategy}; }, in_use);
}

void check_result(const SimResult& result) {
    const auto fail = [](const std::string& what) { throw ConsistencyError(what); };
    std::int64_t fee_all = 0;
    std::int64_t fee_pending = 0;
    for (std::size_t i = 0; i < result.transactions.size(); ++i) {
        const Transaction& tx = result.transactions[i];
        if (tx.id != i) fail("transaction ids are not sequential");
        fee_all += tx.fee;
        if (!tx.inclusion) {
            fee_pending += tx.fee;
            continue;
        }
        if (tx.inclusion->waiting_time < 0.0) fail("negative waiting time");
        if (tx.inclusion->block_id >= result.blocks.size()) fail("dangling block id");
        const Block& block = result.blocks[tx.inclusion->block_id];
        if (std::find(block.tx_ids.begin(), block.tx_ids.end(), tx.id) == block.tx_ids.end())
            fail("block does not list its transaction");
    }
    std::int64_t fee_blocks = 0;
    std::size_t listed = 0;
    for (std::size_t b = 0; b < result.blocks.size(); ++b) {
        const Block& block = result.blocks[b];
        if (block.block_id != b) fail("block ids are not sequential");
        if (b > 0 && !(block.creation_time > result.blocks[b - 1].creation_time))
            fail("block times not strictly increasing");
        if (block.used_bytes > block.capacity) fail("block exceeds capacity");
        std::uint64_t bytes = 0;
        std::int64_t fee = 0;
        for (TxId id : block.tx_ids) {
            const Transaction& tx = result.transactions.at(id);
            if (!tx.inclusion || tx.inclusion->block_id != b) fail("block lists a foreign tx");
            bytes += tx.size;
            fee += tx.fee;
        }
        if (bytes != block.used_bytes) fail("used_bytes mismatch");
        if (fee != block.collected_fee) fail("collected_fee mismatch");
        fee_blocks += block.collected_fee;
        listed += block.tx_ids.size();
    }
    if (listed != result.included_count()) fail("included count mismatch");
    if (fee_blocks + fee_pending != fee_all) fail("fee conservation violated");
}

}  // namespace mempoolsim
