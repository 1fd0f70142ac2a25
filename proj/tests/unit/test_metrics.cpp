#include "mempoolsim/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace mempoolsim;

namespace {

Transaction included(TxId id, double arrival, double wait_s, std::int64_t fee = 100,
                     std::uint32_t size = 200) {
    return Transaction{id, arrival, size, fee, Inclusion{wait_s, 0}};
}

Block block_with(double t, std::uint64_t used, std::uint64_t capacity) {
    Block b;
    b.creation_time = t;
    b.used_bytes = used;
    b.capacity = capacity;
    b.fill_rate = static_cast<double>(used) / static_cast<double>(capacity);
    return b;
}

}  // namespace

TEST_CASE("waits are reported in minutes") {
    SimResult r;
    r.transactions = {included(0, 10.0, 600.0), included(1, 20.0, 1200.0)};
    const SummaryMetrics m = summarize(r, 0.0);
    REQUIRE(m.mean_wait);
    CHECK(*m.mean_wait == doctest::Approx(15.0));
    CHECK(*m.std_wait == doctest::Approx(std::sqrt(50.0)));
    CHECK(m.included_count == 2);
    CHECK(m.pending_count == 0);
}

TEST_CASE("full blocks give fill one with no spread") {
    SimResult r;
    for (int i = 0; i < 5; ++i) r.blocks.push_back(block_with(100.0 * (i + 1), 1000, 1000));
    const SummaryMetrics m = summarize(r, 0.0);
    CHECK(*m.fill_mean == 1.0);
    CHECK(*m.fill_std == 0.0);
    CHECK(m.block_count == 5);
}

TEST_CASE("no qualifying transactions gives an explicit empty summary") {
    SimResult r;
    Transaction pending{0, 5.0, 200, 10, std::nullopt};
    r.transactions = {pending, included(1, 1.0, 60.0)};
    const SummaryMetrics m = summarize(r, 2.0);
    CHECK_FALSE(m.mean_wait);
    CHECK_FALSE(m.std_wait);
    CHECK_FALSE(m.fill_mean);
    // Counts follow the same warmup cut as the statistics.
    CHECK(m.pending_count == 1);
    CHECK(m.included_count == 0);
}

TEST_CASE("warmup boundaries are inclusive") {
    SimResult r;
    r.transactions = {included(0, 99.0, 60.0), included(1, 100.0, 120.0), included(2, 150.0, 240.0)};
    r.blocks = {block_with(99.0, 500, 1000), block_with(100.0, 250, 1000)};
    const SummaryMetrics m = summarize(r, 100.0);
    CHECK(*m.mean_wait == doctest::Approx(3.0));
    CHECK(*m.fill_mean == doctest::Approx(0.25));
}

TEST_CASE("summary matches a flat recomputation over a simulated run") {
    SimConfig c;
    c.horizon = 0.5 * kSecondsPerDay;
    c.warmup = 3600.0;
    const SimResult r = run_simulation(c);
    REQUIRE(r.transactions.size() > 10'000);
    const SummaryMetrics m = summarize(r, c.warmup);

    std::vector<double> waits;
    for (const Transaction& t : r.transactions)
        if (t.arrival_time >= c.warmup && t.inclusion) waits.push_back(t.inclusion->waiting_time / 60.0);
    const double mean = std::accumulate(waits.begin(), waits.end(), 0.0) / waits.size();
    double ss = 0.0;
    for (double w : waits) ss += (w - mean) * (w - mean);
    CHECK(*m.mean_wait == doctest::Approx(mean).epsilon(1e-12));
    CHECK(*m.std_wait == doctest::Approx(std::sqrt(ss / (waits.size() - 1))).epsilon(1e-9));

    std::vector<double> fills;
    for (const Block& b : r.blocks)
        if (b.creation_time >= c.warmup) fills.push_back(static_cast<double>(b.used_bytes) / c.capacity);
    CHECK(*m.fill_mean ==
          doctest::Approx(std::accumulate(fills.begin(), fills.end(), 0.0) / fills.size()).epsilon(1e-12));
    CHECK(m.included_count == waits.size());
    CHECK(m.block_count == fills.size());
}

TEST_CASE("running stats merge equals a single pass") {
    RandomStream rng(3);
    RunningStats all;
    RunningStats a;
    RunningStats b;
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform() * 100.0;
        all.add(x);
        (i % 3 == 0 ? a : b).add(x);
    }
    a.merge(b);
    CHECK(a.count() == all.count());
    CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(a.stddev() == doctest::Approx(all.stddev()).epsilon(1e-10));
    RunningStats empty;
    a.merge(empty);
    CHECK(a.count() == all.count());
}

TEST_CASE("distinct keys split two per bucket") {
    SimResult r;
    for (TxId i = 0; i < 8; ++i) r.transactions.push_back(included(i, 1.0, 60.0 * (i + 1), 100 + 10 * i));
    const QuantileSummary q = quartile_report(r, QuantileKey::Fee, 0.0);
    CHECK(q.bucket_counts == std::array<std::size_t, 4>{2, 2, 2, 2});
    CHECK(*q.bucket_mean_wait[0] == doctest::Approx(1.5));
    CHECK(*q.bucket_mean_wait[3] == doctest::Approx(7.5));
    CHECK(std::is_sorted(q.thresholds.begin(), q.thresholds.end()));
    for (const Ecdf& e : q.bucket_ecdf) CHECK(e.back().fraction == 1.0);
}

TEST_CASE("keys equal to a threshold go to the lower bucket") {
    SimResult r;
    // Fees 1..5: type-7 quartiles are 2, 3, 4 exactly.
    for (TxId i = 0; i < 5; ++i) r.transactions.push_back(included(i, 1.0, 60.0, static_cast<std::int64_t>(i + 1)));
    const QuantileSummary q = quartile_report(r, QuantileKey::Fee, 0.0);
    CHECK(q.thresholds == std::array<double, 3>{2.0, 3.0, 4.0});
    CHECK(q.bucket_counts == std::array<std::size_t, 4>{2, 1, 1, 1});
}

TEST_CASE("heavy ties leave buckets empty without failing") {
    SimResult r;
    for (TxId i = 0; i < 10; ++i) r.transactions.push_back(included(i, 1.0, 60.0, 500));
    const QuantileSummary q = quartile_report(r, QuantileKey::FeePerByte, 0.0);
    CHECK(q.bucket_counts[0] == 10);
    CHECK_FALSE(q.bucket_mean_wait[3]);
    CHECK(q.bucket_ecdf[3].empty());
}

TEST_CASE("buckets partition the included post-warmup set") {
    SimConfig c;
    c.horizon = 0.25 * kSecondsPerDay;
    c.warmup = 0.1 * c.horizon;
    const SimResult r = run_simulation(c);
    std::size_t qualifying = 0;
    for (const Transaction& t : r.transactions) qualifying += (t.arrival_time >= c.warmup && t.inclusion) ? 1 : 0;
    for (QuantileKey key : {QuantileKey::Fee, QuantileKey::FeePerByte}) {
        const QuantileSummary q = quartile_report(r, key, c.warmup);
        CHECK(std::accumulate(q.bucket_counts.begin(), q.bucket_counts.end(), std::size_t{0}) == qualifying);
        for (std::size_t b = 0; b < kBucketCount; ++b)
            if (q.bucket_counts[b] > 0) CHECK(q.bucket_ecdf[b].back().fraction == 1.0);
    }
}

TEST_CASE("quartile report needs four transactions") {
    SimResult r;
    for (TxId i = 0; i < 3; ++i) r.transactions.push_back(included(i, 1.0, 60.0));
    CHECK_THROWS_AS(quartile_report(r, QuantileKey::Fee, 0.0), std::invalid_argument);
}

TEST_CASE("empirical quantile interpolates linearly") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(empirical_quantile(xs, 0.0) == 1.0);
    CHECK(empirical_quantile(xs, 1.0) == 4.0);
    CHECK(empirical_quantile(xs, 0.5) == doctest::Approx(2.5));
    CHECK(empirical_quantile(xs, 0.25) == doctest::Approx(1.75));
    const std::vector<double> one = {7.0};
    CHECK(empirical_quantile(one, 0.3) == 7.0);
}

TEST_CASE("ecdf of a single value") {
    const std::vector<double> w = {10.0};
    CHECK(ecdf(w) == Ecdf{{10.0, 1.0}});
}

TEST_CASE("ecdf collapses repeated values") {
    const std::vector<double> w = {20.0, 10.0, 40.0, 20.0};
    CHECK(ecdf(w) == Ecdf{{10.0, 0.25}, {20.0, 0.75}, {40.0, 1.0}});
    CHECK(ecdf_inverse(ecdf(w), 0.5) == 20.0);
    CHECK(ecdf_inverse(ecdf(w), 0.25) == 10.0);
    CHECK(ecdf_inverse(ecdf(w), 1.0) == 40.0);
}

TEST_CASE("ecdf of nothing is an error") {
    CHECK_THROWS_AS(ecdf(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("ecdf agrees with brute-force counting") {
    RandomStream rng(41);
    std::vector<double> w(1000);
    for (double& x : w) x = static_cast<double>(rng.next_u64() % 300) / 4.0;
    const Ecdf e = ecdf(w);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto count = std::count_if(w.begin(), w.end(), [&](double x) { return x <= e[i].minutes; });
        REQUIRE(e[i].fraction == doctest::Approx(static_cast<double>(count) / 1000.0).epsilon(1e-12));
        if (i > 0) REQUIRE(e[i].minutes > e[i - 1].minutes);
    }
    CHECK(e.back().fraction == 1.0);
}

TEST_CASE("thinned ecdf keeps exact points and the endpoint") {
    RandomStream rng(42);
    std::vector<double> w(50'000);
    for (double& x : w) x = rng.uniform() * 1000.0;
    const Ecdf e = ecdf(w);
    const Ecdf t = thin_ecdf(e, 1000);
    CHECK(t.size() <= 1001);
    CHECK(t.back() == e.back());
    for (const EcdfPoint& p : t) REQUIRE(std::binary_search(e.begin(), e.end(), p, [](const EcdfPoint& a, const EcdfPoint& b) {
        return a.minutes < b.minutes;
    }));
    for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t[i].fraction - t[i - 1].fraction <= 0.0011);
    CHECK(thin_ecdf(Ecdf{{1.0, 1.0}}, 1000).size() == 1);
}

TEST_CASE("key and bucket names") {
    CHECK(to_string(QuantileKey::FeePerByte) == "fee_per_byte");
    CHECK(parse_quantile_key("fee") == QuantileKey::Fee);
    CHECK(bucket_name(0) == "q1");
    CHECK(bucket_name(3) == "gt_q3");
}
