#include "properties.hpp"

#include "mempoolsim/errors.hpp"
#include "mempoolsim/mempool.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace mempoolsim;
namespace mt = mempoolsim::testing;

namespace {

Transaction tx(TxId id, double t, std::uint32_t size, std::int64_t fee) {
    return Transaction{id, t, size, fee, std::nullopt};
}

std::vector<TxId> ids(const std::vector<Transaction>& txs) {
    std::vector<TxId> out;
    for (const auto& t : txs) out.push_back(t.id);
    return out;
}

}  // namespace

TEST_CASE("strategy names round trip") {
    for (Strategy s : kAllStrategies) CHECK(parse_strategy(to_string(s)) == s);
    CHECK(to_string(Strategy::FeePerByte) == "fee_per_byte");
    CHECK_THROWS_AS(parse_strategy("lifo"), std::invalid_argument);
}

TEST_CASE("insert into an empty backlog") {
    Backlog b;
    CHECK(b.empty());
    b.insert(tx(1, 0.5, 250, 1000));
    CHECK(b.size() == 1);
    CHECK(b.total_bytes() == 250);
    CHECK(b.total_fee() == 1000);
    CHECK(b.contains(1));
}

TEST_CASE("duplicate ids and included transactions are rejected") {
    Backlog b;
    b.insert(tx(1, 0.0, 200, 10));
    CHECK_THROWS_AS(b.insert(tx(1, 5.0, 300, 20)), ConsistencyError);
    CHECK(b.size() == 1);
    CHECK(b.total_bytes() == 200);
    Transaction done = tx(2, 0.0, 200, 10);
    done.inclusion = Inclusion{60.0, 0};
    CHECK_THROWS_AS(b.insert(done), ConsistencyError);
}

TEST_CASE("aggregates match independently summed values") {
    RandomStream rng(123);
    Backlog b;
    std::int64_t fee = 0;
    std::uint64_t bytes = 0;
    for (const auto& t : mt::random_transactions(rng, 1000, 100'000, 1'000'000)) {
        b.insert(t);
        fee += t.fee;
        bytes += t.size;
    }
    CHECK(b.total_fee() == fee);
    CHECK(b.total_bytes() == bytes);
}

TEST_CASE("rank orders by each strategy key") {
    Backlog b;
    b.insert(tx(1, 2.0, 2, 10));
    b.insert(tx(2, 3.0, 1, 9));
    b.insert(tx(3, 1.0, 4, 8));
    CHECK(ids(b.rank(Strategy::FeePerByte)) == std::vector<TxId>{2, 1, 3});
    CHECK(ids(b.rank(Strategy::FeeBased)) == std::vector<TxId>{1, 2, 3});
    CHECK(ids(b.rank(Strategy::Fifo)) == std::vector<TxId>{3, 1, 2});
}

TEST_CASE("ties break by arrival time then id") {
    Backlog b;
    b.insert(tx(9, 5.0, 100, 500));
    b.insert(tx(4, 5.0, 200, 1000));  // same fee per byte, same time
    b.insert(tx(7, 1.0, 300, 1500));  // same fee per byte, earlier
    CHECK(ids(b.rank(Strategy::FeePerByte)) == std::vector<TxId>{7, 4, 9});
    CHECK(ids(b.rank(Strategy::Fifo)) == std::vector<TxId>{7, 4, 9});
}

TEST_CASE("fee per byte compares exactly") {
    // Both ratios round to the same double; the exact comparison still
    // puts the larger one (id 2) first despite the id tie-break.
    Backlog b;
    b.insert(tx(1, 0.0, 3'999'999'999, 1'000'000'000'000'000'000));
    b.insert(tx(2, 0.0, 4'000'000'000, 1'000'000'000'250'000'001));
    REQUIRE(b.rank(Strategy::FeePerByte)[0].fee_per_byte() ==
            b.rank(Strategy::FeePerByte)[1].fee_per_byte());
    CHECK(ids(b.rank(Strategy::FeePerByte)) == std::vector<TxId>{2, 1});
}

TEST_CASE("greedy packing skips and continues") {
    Backlog b;
    b.insert(tx(1, 0.0, 600'000, 3000));
    b.insert(tx(2, 1.0, 500'000, 2000));
    b.insert(tx(3, 2.0, 300'000, 1000));
    const auto sel = b.select_block(1'000'000, Strategy::FeeBased);
    CHECK(ids(sel) == std::vector<TxId>{1, 3});
    std::uint64_t bytes = 0;
    for (const auto& t : sel) bytes += t.size;
    CHECK(bytes == 900'000);
    CHECK(b.size() == 3);
}

TEST_CASE("empty backlog selects nothing") {
    Backlog b;
    for (Strategy s : kAllStrategies) CHECK(b.select_block(1'000'000, s).empty());
}

TEST_CASE("select_block agrees with the scan oracle") {
    const auto r = mt::select_block_matches_scan_oracle(200, 5);
    INFO(r.detail);
    CHECK(r.ok);
}

TEST_CASE("selection is maximal under skip-and-continue") {
    RandomStream rng(77);
    for (int inst = 0; inst < 200; ++inst) {
        Backlog b;
        const auto txs = mt::random_transactions(rng, 50, 2000, 100);
        for (const auto& t : txs) b.insert(t);
        for (Strategy s : kAllStrategies) {
            const auto ranked = b.rank(s);
            const auto sel = b.select_block(10'000, s);
            std::vector<bool> chosen(ranked.size());
            std::size_t k = 0;
            std::uint64_t remaining = 10'000;
            for (std::size_t i = 0; i < ranked.size(); ++i) {
                if (k < sel.size() && sel[k].id == ranked[i].id) {
                    remaining -= ranked[i].size;
                    ++k;
                } else {
                    // Skipped: it must not have fit at that moment.
                    REQUIRE(ranked[i].size > remaining);
                }
            }
            REQUIRE(k == sel.size());
        }
    }
}

TEST_CASE("fee order is optimal when sizes are equal") {
    RandomStream rng(8);
    for (int inst = 0; inst < 300; ++inst) {
        const std::size_t n = 1 + rng.next_u64() % 12;
        const std::uint32_t size = 100;
        const std::uint64_t capacity = 100 * (rng.next_u64() % (n + 2));
        std::vector<Transaction> txs;
        Backlog b;
        for (std::size_t i = 0; i < n; ++i) {
            txs.push_back(tx(i, static_cast<double>(rng.next_u64() % 5), size,
                             1 + static_cast<std::int64_t>(rng.next_u64() % 50)));
            b.insert(txs.back());
        }
        std::int64_t best = 0;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            std::uint64_t bytes = 0;
            std::int64_t fee = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1U << i)) {
                    bytes += txs[i].size;
                    fee += txs[i].fee;
                }
            if (bytes <= capacity) best = std::max(best, fee);
        }
        auto fee_of = [](const std::vector<Transaction>& sel) {
            std::int64_t f = 0;
            for (const auto& t : sel) f += t.fee;
            return f;
        };
        const std::int64_t fb = fee_of(b.select_block(capacity, Strategy::FeeBased));
        REQUIRE(fb == best);
        REQUIRE(fb >= fee_of(b.select_block(capacity, Strategy::FeePerByte)));
        REQUIRE(fb >= fee_of(b.select_block(capacity, Strategy::Fifo)));
    }
}

TEST_CASE("rank is a permutation and leaves transactions untouched") {
    RandomStream rng(19);
    const auto txs = mt::random_transactions(rng, 300, 5000, 1000);
    Backlog b;
    for (const auto& t : txs) b.insert(t);
    std::map<TxId, Transaction> by_id;
    for (const auto& t : txs) by_id[t.id] = t;
    for (Strategy s : kAllStrategies) {
        const auto r = b.rank(s);
        REQUIRE(r.size() == txs.size());
        std::map<TxId, int> seen;
        for (const auto& t : r) {
            REQUIRE(++seen[t.id] == 1);
            REQUIRE(t == by_id.at(t.id));
        }
        REQUIRE(std::is_sorted(r.begin(), r.end(), RankOrder{s}));
    }
}

TEST_CASE("remove_all of everything empties the backlog") {
    Backlog b;
    std::vector<Transaction> all;
    for (TxId i = 0; i < 10; ++i) {
        all.push_back(tx(i, static_cast<double>(i), 150 + static_cast<std::uint32_t>(i), 10));
        b.insert(all.back());
    }
    b.remove_all(all);
    CHECK(b.empty());
    CHECK(b.total_bytes() == 0);
    CHECK(b.total_fee() == 0);
    CHECK(b.select_block(1'000'000, Strategy::FeePerByte).empty());
}

TEST_CASE("remove_all of nothing is the identity") {
    Backlog b;
    b.insert(tx(1, 0.0, 200, 30));
    b.remove_all({});
    CHECK(b.size() == 1);
    CHECK(b.total_bytes() == 200);
}

TEST_CASE("removing a non-pending transaction leaves the backlog untouched") {
    Backlog b;
    b.insert(tx(1, 0.0, 200, 30));
    b.insert(tx(2, 0.0, 300, 40));
    const std::vector<Transaction> bad = {tx(1, 0.0, 200, 30), tx(3, 0.0, 10, 1)};
    CHECK_THROWS_AS(b.remove_all(bad), ConsistencyError);
    CHECK(b.size() == 2);
    CHECK(b.total_bytes() == 500);
    const std::vector<Transaction> twice = {tx(1, 0.0, 200, 30), tx(1, 0.0, 200, 30)};
    CHECK_THROWS_AS(b.remove_all(twice), ConsistencyError);
    CHECK(b.size() == 2);
    CHECK(b.rank(Strategy::FeeBased).size() == 2);
}

TEST_CASE("random insert and remove interleaving keeps aggregates exact") {
    RandomStream rng(2024);
    Backlog b;
    std::map<TxId, Transaction> model;
    TxId next = 0;
    for (int op = 0; op < 10'000; ++op) {
        if (model.empty() || rng.next_u64() % 3 != 0) {
            Transaction t = tx(next++, op * 0.1, 1 + static_cast<std::uint32_t>(rng.next_u64() % 4000),
                               1 + static_cast<std::int64_t>(rng.next_u64() % 100'000));
            b.insert(t);
            model[t.id] = t;
        } else {
            std::vector<Transaction> batch;
            for (auto it = model.begin(); it != model.end();) {
                if (rng.next_u64() % 4 == 0) {
                    batch.push_back(it->second);
                    it = model.erase(it);
                } else {
                    ++it;
                }
            }
            b.remove_all(batch);
        }
        std::uint64_t bytes = 0;
        std::int64_t fee = 0;
        for (const auto& [id, t] : model) {
            bytes += t.size;
            fee += t.fee;
        }
        REQUIRE(b.size() == model.size());
        REQUIRE(b.total_bytes() == bytes);
        REQUIRE(b.total_fee() == fee);
    }
    for (Strategy s : kAllStrategies) {
        std::vector<Transaction> flat;
        for (const auto& [id, t] : model) flat.push_back(t);
        CHECK(ids(b.select_block(50'000, s)) == mt::oracle_select(flat, 50'000, s));
    }
}
