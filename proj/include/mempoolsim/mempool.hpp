#pragma once

#include <absl/container/btree_set.h>
#include <absl/container/flat_hash_map.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mempoolsim {

using TxId = std::uint64_t;
using BlockId = std::uint64_t;

struct Inclusion {
    double waiting_time = 0.0;  // seconds
    BlockId block_id = 0;

    bool operator==(const Inclusion&) const = default;
};

/// One arrival: [t, s, f, f/s, d, bN]. `inclusion` holds (d, bN) once mined.
struct Transaction {
    TxId id = 0;
    double arrival_time = 0.0;  // seconds
    std::uint32_t size = 0;     // bytes
    std::int64_t fee = 0;       // satoshi
    std::optional<Inclusion> inclusion;

    double fee_per_byte() const { return static_cast<double>(fee) / static_cast<double>(size); }
    bool included() const { return inclusion.has_value(); }

    bool operator==(const Transaction&) const = default;
};

enum class Strategy { FeePerByte, FeeBased, Fifo };

inline constexpr std::array<Strategy, 3> kAllStrategies = {
    Strategy::FeePerByte, Strategy::FeeBased, Strategy::Fifo};

std::string_view to_string(Strategy s);
/// Accepts "fee_per_byte", "fee_based", "fifo". Throws std::invalid_argument.
Strategy parse_strategy(std::string_view name);

/// Strict weak ordering used by `rank`: strategy key first, then ascending
/// arrival time, then ascending id. Fee-per-byte is compared exactly as a
/// rational number.
struct RankOrder {
    Strategy strategy = Strategy::FeePerByte;

    bool operator()(const Transaction& a, const Transaction& b) const;
};

/// Pending transactions awaiting inclusion. Unbounded.
///
/// Ordered indexes are kept for the strategies passed at construction so
/// block selection does not re-sort the whole backlog each time; rank and
/// select_block still work (by sorting) for any other strategy.
class Backlog {
public:
    Backlog();
    explicit Backlog(std::span<const Strategy> indexed);

    /// Throws ConsistencyError on a duplicate id or an already-included tx.
    void insert(const Transaction& tx);

    /// All pending transactions in strategy order.
    std::vector<Transaction> rank(Strategy strategy) const;

    /// Greedy skip-and-continue packing over the rank order. Does not mutate.
    std::vector<Transaction> select_block(std::uint64_t capacity, Strategy strategy) const;

    /// Removes every listed transaction; throws ConsistencyError (leaving the
    /// backlog untouched) if any is not pending or listed twice.
    void remove_all(std::span<const Transaction> txs);

    bool contains(TxId id) const { return pending_.contains(id); }
    std::size_t size() const { return pending_.size(); }
    bool empty() const { return pending_.empty(); }
    std::uint64_t total_bytes() const { return total_bytes_; }
    std::int64_t total_fee() const { return total_fee_; }

    /// Pending transactions in unspecified order.
    std::vector<Transaction> pending() const;

private:
    struct IndexKey {
        std::int64_t fee;
        std::uint32_t size;
        double arrival_time;
        TxId id;
    };
    struct IndexOrder {
        Strategy strategy;
        bool operator()(const IndexKey& a, const IndexKey& b) const;
    };
    using Index = absl::btree_set<IndexKey, IndexOrder>;

    static IndexKey key_of(const Transaction& tx) {
        return {tx.fee, tx.size, tx.arrival_time, tx.id};
    }
    static Transaction from_key(const IndexKey& key) {
        return Transaction{key.id, key.arrival_time, key.size, key.fee, std::nullopt};
    }
    const Index* index_for(Strategy s) const;

    absl::flat_hash_map<TxId, Transaction> pending_;
    std::vector<Index> indexes_;
    // Smallest size ever inserted; a lower bound on every pending size.
    std::uint32_t min_size_seen_ = UINT32_MAX;
    std::uint64_t total_bytes_ = 0;
    std::int64_t total_fee_ = 0;
};

}  // namespace mempoolsim
