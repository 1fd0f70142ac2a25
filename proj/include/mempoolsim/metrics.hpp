#pragma once

#include "mempoolsim/engine.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace mempoolsim {

/// Streaming mean and variance; mergeable across runs.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    /// Sample standard deviation; zero below two observations.
    double stddev() const;

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Waits (minutes) of included transactions arriving at or after warmup.
RunningStats wait_stats(const SimResult& result, double warmup);
/// Fill rates of blocks created at or after warmup.
RunningStats fill_stats(const SimResult& result, double warmup);

/// Run-level statistics. Wait statistics are in minutes and are absent
/// when no transaction qualifies; fill statistics are absent without blocks.
struct SummaryMetrics {
    std::optional<double> mean_wait;
    std::optional<double> std_wait;
    std::optional<double> fill_mean;
    std::optional<double> fill_std;
    std::size_t included_count = 0;
    std::size_t pending_count = 0;
    std::size_t block_count = 0;
};

/// Transactions arriving at or after `warmup` count toward wait statistics
/// (pending ones are right-censored and only counted); blocks created at or
/// after `warmup` count toward fill statistics.
SummaryMetrics summarize(const SimResult& result, double warmup);

enum class QuantileKey { Fee, FeePerByte };

std::string_view to_string(QuantileKey key);
QuantileKey parse_quantile_key(std::string_view name);

struct EcdfPoint {
    double minutes = 0.0;
    double fraction = 0.0;

    bool operator==(const EcdfPoint&) const = default;
};

using Ecdf = std::vector<EcdfPoint>;

/// Step-function points of the empirical CDF of `waits_minutes`, one per
/// distinct value. Throws std::invalid_argument on empty input.
Ecdf ecdf(std::span<const double> waits_minutes);

/// Smallest wait (minutes) at which the ECDF reaches `fraction`.
double ecdf_inverse(const Ecdf& points, double fraction);

/// Linear-interpolation empirical quantile of sorted data, p in [0, 1].
double empirical_quantile(std::span<const double> sorted, double p);

inline constexpr std::size_t kBucketCount = 4;

struct QuantileSummary {
    QuantileKey key = QuantileKey::FeePerByte;
    std::array<double, 3> thresholds{};
    std::array<std::size_t, kBucketCount> bucket_counts{};
    /// Minutes; absent for an empty bucket (possible with heavy ties).
    std::array<std::optional<double>, kBucketCount> bucket_mean_wait;
    std::array<Ecdf, kBucketCount> bucket_ecdf;
};

/// Buckets included post-warmup transactions by the chosen key at its
/// 25/50/75% quantiles. A key equal to a threshold goes to the lower bucket.
/// Throws std::invalid_argument with fewer than four qualifying transactions.
QuantileSummary quartile_report(const SimResult& result, QuantileKey key, double warmup);

/// Keeps at most about `max_points` points of an ECDF: the first point
/// reaching each multiple of 1/max_points, plus the last point. Every kept
/// point is an exact point of the input.
Ecdf thin_ecdf(const Ecdf& points, std::size_t max_points);

std::string_view bucket_name(std::size_t bucket);

}  // namespace mempoolsim
