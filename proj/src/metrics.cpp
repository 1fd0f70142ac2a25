#include "mempoolsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mempoolsim {

void RunningStats::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count_);
    const double n_b = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double n = n_a + n_b;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
}

double RunningStats::stddev() const {
    return count_ > 1 ? std::sqrt(m2_ / static_cast<double>(count_ - 1)) : 0.0;
}

RunningStats wait_stats(const SimResult& result, double warmup) {
    RunningStats stats;
    for (const Transaction& tx : result.transactions)
        if (tx.arrival_time >= warmup && tx.inclusion) stats.add(tx.inclusion->waiting_time / 60.0);
    return stats;
}

RunningStats fill_stats(const SimResult& result, double warmup) {
    RunningStats stats;
    for (const Block& block : result.blocks)
        if (block.creation_time >= warmup) stats.add(block.fill_rate);
    return stats;
}

SummaryMetrics summarize(const SimResult& result, double warmup) {
    SummaryMetrics out;
    for (const Transaction& tx : result.transactions) {
        if (tx.arrival_time < warmup) continue;
        ++(tx.inclusion ? out.included_count : out.pending_count);
    }
    const RunningStats waits = wait_stats(result, warmup);
    if (waits.count() > 0) {
        out.mean_wait = waits.mean();
        out.std_wait = waits.stddev();
    }
    const RunningStats fills = fill_stats(result, warmup);
    out.block_count = fills.count();
    if (fills.count() > 0) {
        out.fill_mean = fills.mean();
        out.fill_std = fills.stddev();
    }
    return out;
}

std::string_view to_string(QuantileKey key) {
    return key == QuantileKey::Fee ? "fee" : "fee_per_byte";
}

QuantileKey parse_quantile_key(std::string_view name) {
    if (name == "fee") return QuantileKey::Fee;
    if (name == "fee_per_byte") return QuantileKey::FeePerByte;
    throw std::invalid_argument("unknown quantile key '" + std::string(name) + "'");
}

Ecdf ecdf(std::span<const double> waits_minutes) {
    if (waits_minutes.empty()) throw std::invalid_argument("ecdf of an empty sample");
    std::vector<double> sorted(waits_minutes.begin(), waits_minutes.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    Ecdf points;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        points.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    points.back().fraction = 1.0;
    return points;
}

double ecdf_inverse(const Ecdf& points, double fraction) {
    for (const EcdfPoint& p : points)
        if (p.fraction >= fraction) return p.minutes;
    return points.empty() ? 0.0 : points.back().minutes;
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

QuantileSummary quartile_report(const SimResult& result, QuantileKey key, double warmup) {
    struct Sample {
        double key;
        double wait_minutes;
    };
    std::vector<Sample> samples;
    for (const Transaction& tx : result.transactions) {
        if (tx.arrival_time < warmup || !tx.inclusion) continue;
        const double k = key == QuantileKey::Fee ? static_cast<double>(tx.fee) : tx.fee_per_byte();
        samples.push_back({k, tx.inclusion->waiting_time / 60.0});
    }
    if (samples.size() < kBucketCount)
        throw std::invalid_argument("quartile report needs at least 4 included transactions, got " +
                                    std::to_string(samples.size()));

    std::vector<double> keys;
    keys.reserve(samples.size());
    for (const Sample& s : samples) keys.push_back(s.key);
    std::sort(keys.begin(), keys.end());

    QuantileSummary out;
    out.key = key;
    out.thresholds = {empirical_quantile(keys, 0.25), empirical_quantile(keys, 0.50),
                      empirical_quantile(keys, 0.75)};

    std::array<std::vector<double>, kBucketCount> waits;
    for (const Sample& s : samples) {
        const auto bucket = static_cast<std::size_t>(
            std::lower_bound(out.thresholds.begin(), out.thresholds.end(), s.key) -
            out.thresholds.begin());
        waits[bucket].push_back(s.wait_minutes);
    }
    for (std::size_t b = 0; b < kBucketCount; ++b) {
        out.bucket_counts[b] = waits[b].size();
        if (waits[b].empty()) continue;
        RunningStats stats;
        for (double w : waits[b]) stats.add(w);
        out.bucket_mean_wait[b] = stats.mean();
        out.bucket_ecdf[b] = ecdf(waits[b]);
    }
    return out;
}

Ecdf thin_ecdf(const Ecdf& points, std::size_t max_points) {
    if (max_points == 0 || points.size() <= max_points) return points;
    Ecdf out;
    std::size_t next_level = 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double level = static_cast<double>(next_level) / static_cast<double>(max_points);
        if (points[i].fraction >= level || i + 1 == points.size()) {
            out.push_back(points[i]);
            while (next_level <= max_points &&
                   points[i].fraction >= static_cast<double>(next_level) / static_cast<double>(max_points))
                ++next_level;
        }
    }
    return out;
}

std::string_view bucket_name(std::size_t bucket) {
    static constexpr std::array<std::string_view, kBucketCount> names = {"q1", "q2", "q3", "gt_q3"};
    return names.at(bucket);
}

}  // namespace mempoolsim
