#include "mempoolsim/mempool.hpp"

#include "mempoolsim/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace mempoolsim {

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::FeePerByte: return "fee_per_byte";
    case Strategy::FeeBased: return "fee_based";
    case Strategy::Fifo: return "fifo";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : kAllStrategies)
        if (to_string(s) == name) return s;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

namespace {

// Negative when a ranks before b on the strategy key alone, positive when
// after, zero on a tie.
int compare_key(Strategy strategy, std::int64_t fee_a, std::uint32_t size_a, double arrival_a,
                std::int64_t fee_b, std::uint32_t size_b, double arrival_b) {
    switch (strategy) {
    case Strategy::FeePerByte: {
        const __int128 lhs = static_cast<__int128>(fee_a) * size_b;
        const __int128 rhs = static_cast<__int128>(fee_b) * size_a;
        return lhs > rhs ? -1 : (lhs < rhs ? 1 : 0);
    }
    case Strategy::FeeBased:
        return fee_a > fee_b ? -1 : (fee_a < fee_b ? 1 : 0);
    case Strategy::Fifo:
        return arrival_a < arrival_b ? -1 : (arrival_a > arrival_b ? 1 : 0);
    }
    return 0;
}

bool ranks_before(Strategy strategy, std::int64_t fee_a, std::uint32_t size_a, double arrival_a,
                  TxId id_a, std::int64_t fee_b, std::uint32_t size_b, double arrival_b,
                  TxId id_b) {
    const int c = compare_key(strategy, fee_a, size_a, arrival_a, fee_b, size_b, arrival_b);
    if (c != 0) return c < 0;
    if (arrival_a != arrival_b) return arrival_a < arrival_b;
    return id_a < id_b;
}

}  // namespace

bool RankOrder::operator()(const Transaction& a, const Transaction& b) const {
    return ranks_before(strategy, a.fee, a.size, a.arrival_time, a.id, b.fee, b.size,
                        b.arrival_time, b.id);
}

bool Backlog::IndexOrder::operator()(const IndexKey& a, const IndexKey& b) const {
    return ranks_before(strategy, a.fee, a.size, a.arrival_time, a.id, b.fee, b.size,
                        b.arrival_time, b.id);
}

Backlog::Backlog() : Backlog(std::span<const Strategy>(kAllStrategies)) {}

Backlog::Backlog(std::span<const Strategy> indexed) {
    for (Strategy s : indexed)
        if (index_for(s) == nullptr) indexes_.emplace_back(IndexOrder{s});
}

const Backlog::Index* Backlog::index_for(Strategy s) const {
    for (const Index& index : indexes_)
        if (index.key_comp().strategy == s) return &index;
    return nullptr;
}

void Backlog::insert(const Transaction& tx) {
    if (tx.included())
        throw ConsistencyError("transaction " + std::to_string(tx.id) + " is already included");
    auto [it, inserted] = pending_.emplace(tx.id, tx);
    if (!inserted)
        throw ConsistencyError("duplicate transaction id " + std::to_string(tx.id));
    const IndexKey key = key_of(tx);
    for (Index& index : indexes_) index.insert(key);
    min_size_seen_ = std::min(min_size_seen_, tx.size);
    total_bytes_ += tx.size;
    total_fee_ += tx.fee;
}

std::vector<Transaction> Backlog::pending() const {
    std::vector<Transaction> out;
    out.reserve(pending_.size());
    for (const auto& [id, tx] : pending_) out.push_back(tx);
    return out;
}

std::vector<Transaction> Backlog::rank(Strategy strategy) const {
    std::vector<Transaction> out;
    out.reserve(pending_.size());
    if (const Index* index = index_for(strategy)) {
        for (const IndexKey& key : *index) out.push_back(from_key(key));
        return out;
    }
    out = pending();
    std::sort(out.begin(), out.end(), RankOrder{strategy});
    return out;
}

std::vector<Transaction> Backlog::select_block(std::uint64_t capacity, Strategy strategy) const {
    std::vector<Transaction> selected;
    if (pending_.empty()) return selected;

    // Once the remaining room is below every pending size nothing else can
    // fit, so stopping early gives the same selection as a full scan.
    std::uint64_t remaining = capacity;
    const auto take = [&](const Transaction& tx) {
        if (tx.size <= remaining) {
            selected.push_back(tx);
            remaining -= tx.size;
        }
        return remaining >= min_size_seen_;
    };

    if (const Index* index = index_for(strategy)) {
        for (const IndexKey& key : *index)
            if (!take(from_key(key))) break;
    } else {
        for (const Transaction& tx : rank(strategy))
            if (!take(tx)) break;
    }
    return selected;
}

void Backlog::remove_all(std::span<const Transaction> txs) {
    std::vector<TxId> ids;
    ids.reserve(txs.size());
    for (const Transaction& tx : txs) {
        if (!pending_.contains(tx.id))
            throw ConsistencyError("transaction " + std::to_string(tx.id) + " is not pending");
        ids.push_back(tx.id);
    }
    std::sort(ids.begin(), ids.end());
    if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
        throw ConsistencyError("transaction " + std::to_string(*dup) + " listed twice");

    if (ids.size() == pending_.size()) {
        pending_.clear();
        for (Index& index : indexes_) index.clear();
        total_bytes_ = 0;
        total_fee_ = 0;
        return;
    }
    for (const Transaction& listed : txs) {
        auto it = pending_.find(listed.id);
        const Transaction& tx = it->second;
        const IndexKey key = key_of(tx);
        for (Index& index : indexes_) index.erase(key);
        total_bytes_ -= tx.size;
        total_fee_ -= tx.fee;
        pending_.erase(it);
    }
}

}  // namespace mempoolsim
