#pragma once

#include "mempoolsim/config.hpp"
#include "mempoolsim/game.hpp"
#include "mempoolsim/metrics.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace mempoolsim {

/// One (capacity, strategy) cell of a sweep, pooled over replications.
struct SweepSummaryRow {
    std::uint64_t capacity = 0;
    Strategy strategy = Strategy::FeePerByte;
    std::optional<double> mean_wait_min;
    std::optional<double> std_wait_min;
    std::optional<double> fill_mean;
    std::optional<double> fill_std;
};

/// Bucket mean wait averaged over the replications where the bucket exists.
struct SweepQuartileRow {
    std::uint64_t capacity = 0;
    Strategy strategy = Strategy::FeePerByte;
    QuantileKey key = QuantileKey::FeePerByte;
    std::size_t bucket = 0;
    std::optional<double> mean_wait_min;
};

/// Bucket ECDF from the first replication of a cell.
struct SweepEcdf {
    std::uint64_t capacity = 0;
    Strategy strategy = Strategy::FeePerByte;
    std::size_t bucket = 0;
    Ecdf points;
};

struct SweepReport {
    std::vector<SweepSummaryRow> summary;
    std::vector<SweepQuartileRow> quartiles;
    std::vector<SweepEcdf> ecdfs;
};

/// Largest number of points written per ECDF file.
inline constexpr std::size_t kEcdfMaxPoints = 1000;

/// The bucketing key reported for a strategy's ECDFs: fee for fee-based
/// packing, fee per byte otherwise.
QuantileKey ecdf_key(Strategy strategy);

/// Seed of replication `rep` in a sweep. Independent of capacity and
/// strategy, so every cell sees the same arrival streams.
std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t rep);

/// Runs the capacity x strategy grid of `spec` without writing anything.
SweepReport run_sweep(const ExperimentSpec& spec);

/// Writes summary.csv, quartiles.csv and ecdf_<capacity>_<strategy>_<bucket>.csv.
void write_sweep(const SweepReport& report, const std::filesystem::path& dir);

std::string format_sweep_summary(const SweepReport& report);
std::string format_sweep_quartiles(const SweepReport& report);
std::string format_ecdf(const Ecdf& points);

/// Fails before simulating if `out_dir` cannot be written.
SweepReport cmd_sweep(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

/// Single run of spec.base: summary.csv, quartiles.csv, transactions.csv,
/// blocks.csv and trace.csv (the arrivals in trace format).
SimResult cmd_simulate(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

struct GameReport {
    std::uint64_t capacity = 0;
    GamePayoffs payoffs;
    EquilibriumReport equilibrium;
};

/// Per game capacity: payoff_matrix_<capacity>.csv (satoshi),
/// payoff_share_<capacity>.csv and equilibrium_<capacity>.csv. The
/// equilibrium is computed on the satoshi matrix.
std::vector<GameReport> cmd_game(const ExperimentSpec& spec, GameMode mode,
                                 const std::filesystem::path& out_dir);

/// Equilibrium analysis of a payoff matrix fixture; writes
/// equilibrium_<fixture stem>.csv.
EquilibriumReport cmd_analyze_matrix(const std::filesystem::path& matrix_path,
                                     const std::filesystem::path& out_dir);

struct ValidationRow {
    std::uint64_t capacity = 0;
    std::optional<double> trace_mean_wait_min;
    std::optional<double> synthetic_mean_wait_min;
    std::optional<double> relative_error;  // (synthetic - trace) / trace
};

/// Trace-driven against synthetic mean waits over the sweep capacities,
/// strategy spec.base.strategy, pooled over spec.replications (replication
/// r uses the same block-process seed on both sides).
std::vector<ValidationRow> run_validation(const TraceArrivals& trace, const ExperimentSpec& spec);

std::string format_validation(const std::vector<ValidationRow>& rows);

/// Loads the trace, runs the comparison and writes validation.csv.
std::vector<ValidationRow> cmd_validate(const std::filesystem::path& trace_path,
                                        const ExperimentSpec& spec,
                                        const std::filesystem::path& out_dir);

}  // namespace mempoolsim
