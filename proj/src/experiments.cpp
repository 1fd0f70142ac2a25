#include "mempoolsim/experiments.hpp"

#include "mempoolsim/config_text.hpp"
#include "mempoolsim/errors.hpp"
#include "mempoolsim/io.hpp"
#include "mempoolsim/parallel.hpp"

#include <string>

namespace mempoolsim {

namespace fs = std::filesystem;

namespace {

std::string optional_number(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

constexpr std::array<QuantileKey, 2> kKeys = {QuantileKey::Fee, QuantileKey::FeePerByte};

struct RunDigest {
    RunningStats waits;
    RunningStats fills;
    std::array<std::optional<QuantileSummary>, 2> quartiles;  // indexed like kKeys
};

RunDigest digest(const SimResult& result, double warmup, bool keep_ecdf, Strategy strategy) {
    RunDigest d;
    d.waits = wait_stats(result, warmup);
    d.fills = fill_stats(result, warmup);
    if (d.waits.count() >= kBucketCount) {
        for (std::size_t k = 0; k < kKeys.size(); ++k) {
            QuantileSummary q = quartile_report(result, kKeys[k], warmup);
            for (Ecdf& e : q.bucket_ecdf)
                e = keep_ecdf && kKeys[k] == ecdf_key(strategy) ? thin_ecdf(e, kEcdfMaxPoints) : Ecdf{};
            d.quartiles[k] = std::move(q);
        }
    }
    return d;
}

}  // namespace

QuantileKey ecdf_key(Strategy strategy) {
    return strategy == Strategy::FeeBased ? QuantileKey::Fee : QuantileKey::FeePerByte;
}

std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t rep) {
    return derive_run_seed(base_seed, 0, rep);
}

SweepReport run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_caps = spec.sweep_capacities.size();
    const std::size_t n_strats = spec.sweep_strategies.size();
    const std::size_t cells = n_caps * n_strats;
    const std::size_t runs = cells * spec.replications;
    std::vector<RunDigest> digests(runs);

    parallel_for(runs, spec.threads, [&](std::size_t run) {
        const std::size_t cell = run / spec.replications;
        const std::size_t rep = run % spec.replications;
        SimConfig cfg = spec.base;
        cfg.capacity = spec.sweep_capacities[cell / n_strats];
        cfg.strategy = spec.sweep_strategies[cell % n_strats];
        cfg.seed = sweep_seed(spec.base.seed, rep);
        digests[run] = digest(run_simulation(cfg), cfg.warmup, rep == 0, cfg.strategy);
    });

    SweepReport report;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const std::uint64_t capacity = spec.sweep_capacities[cell / n_strats];
        const Strategy strategy = spec.sweep_strategies[cell % n_strats];
        RunningStats waits;
        RunningStats fills;
        std::array<std::array<RunningStats, kBucketCount>, 2> bucket_means;
        for (std::size_t rep = 0; rep < spec.replications; ++rep) {
            const RunDigest& d = digests[cell * spec.replications + rep];
            waits.merge(d.waits);
            fills.merge(d.fills);
            for (std::size_t k = 0; k < kKeys.size(); ++k) {
                if (!d.quartiles[k]) continue;
                for (std::size_t b = 0; b < kBucketCount; ++b)
                    if (const auto& m = d.quartiles[k]->bucket_mean_wait[b]) bucket_means[k][b].add(*m);
            }
        }

        SweepSummaryRow row{capacity, strategy, {}, {}, {}, {}};
        if (waits.count() > 0) {
            row.mean_wait_min = waits.mean();
            row.std_wait_min = waits.stddev();
        }
        if (fills.count() > 0) {
            row.fill_mean = fills.mean();
            row.fill_std = fills.stddev();
        }
        report.summary.push_back(row);

        for (std::size_t k = 0; k < kKeys.size(); ++k)
            for (std::size_t b = 0; b < kBucketCount; ++b) {
                SweepQuartileRow q{capacity, strategy, kKeys[k], b, {}};
                if (bucket_means[k][b].count() > 0) q.mean_wait_min = bucket_means[k][b].mean();
                report.quartiles.push_back(q);
            }

        const RunDigest& first = digests[cell * spec.replications];
        const std::size_t natural = ecdf_key(strategy) == kKeys[0] ? 0 : 1;
        if (first.quartiles[natural])
            for (std::size_t b = 0; b < kBucketCount; ++b)
                if (!first.quartiles[natural]->bucket_ecdf[b].empty())
                    report.ecdfs.push_back(
                        {capacity, strategy, b, first.quartiles[natural]->bucket_ecdf[b]});
    }
    return report;
}

std::string format_sweep_summary(const SweepReport& report) {
    std::string out = "capacity_bytes,strategy,mean_wait_min,std_wait_min,fill_mean,fill_std\n";
    for (const SweepSummaryRow& r : report.summary) {
        out += std::to_string(r.capacity) + "," + std::string(to_string(r.strategy)) + "," +
               optional_number(r.mean_wait_min) + "," + optional_number(r.std_wait_min) + "," +
               optional_number(r.fill_mean) + "," + optional_number(r.fill_std) + "\n";
    }
    return out;
}

std::string format_sweep_quartiles(const SweepReport& report) {
    std::string out = "capacity_bytes,strategy,key,bucket,mean_wait_min\n";
    for (const SweepQuartileRow& q : report.quartiles) {
        out += std::to_string(q.capacity) + "," + std::string(to_string(q.strategy)) + "," +
               std::string(to_string(q.key)) + "," + std::string(bucket_name(q.bucket)) + "," +
               optional_number(q.mean_wait_min) + "\n";
    }
    return out;
}

std::string format_ecdf(const Ecdf& points) {
    std::string out = "wait_min,cumulative_fraction\n";
    for (const EcdfPoint& p : points)
        out += format_number(p.minutes) + "," + format_number(p.fraction) + "\n";
    return out;
}

void write_sweep(const SweepReport& report, const fs::path& dir) {
    write_file_atomic(dir / "summary.csv", format_sweep_summary(report));
    write_file_atomic(dir / "quartiles.csv", format_sweep_quartiles(report));
    for (const SweepEcdf& e : report.ecdfs) {
        const std::string name = "ecdf_" + std::to_string(e.capacity) + "_" +
                                 std::string(to_string(e.strategy)) + "_" +
                                 std::string(bucket_name(e.bucket)) + ".csv";
        write_file_atomic(dir / name, format_ecdf(e.points));
    }
}

SweepReport cmd_sweep(const ExperimentSpec& spec, const fs::path& out_dir) {
    spec.validate();
    ensure_writable_dir(out_dir);
    SweepReport report = run_sweep(spec);
    write_sweep(report, out_dir);
    return report;
}

SimResult cmd_simulate(const ExperimentSpec& spec, const fs::path& out_dir) {
    spec.validate();
    ensure_writable_dir(out_dir);
    SimResult result = run_simulation(spec.base);
    const double warmup = spec.base.warmup;

    SweepReport single;
    const RunDigest d = digest(result, warmup, true, spec.base.strategy);
    SweepSummaryRow row{spec.base.capacity, spec.base.strategy, {}, {}, {}, {}};
    if (d.waits.count() > 0) {
        row.mean_wait_min = d.waits.mean();
        row.std_wait_min = d.waits.stddev();
    }
    if (d.fills.count() > 0) {
        row.fill_mean = d.fills.mean();
        row.fill_std = d.fills.stddev();
    }
    single.summary.push_back(row);
    for (std::size_t k = 0; k < kKeys.size(); ++k)
        for (std::size_t b = 0; b < kBucketCount; ++b)
            single.quartiles.push_back({spec.base.capacity, spec.base.strategy, kKeys[k], b,
                                        d.quartiles[k] ? d.quartiles[k]->bucket_mean_wait[b]
                                                       : std::nullopt});
    write_file_atomic(out_dir / "summary.csv", format_sweep_summary(single));
    write_file_atomic(out_dir / "quartiles.csv", format_sweep_quartiles(single));

    std::string txs =
        "id,arrival_time_s,size_bytes,fee_satoshi,fee_per_byte,included,waiting_time_s,block_id\n";
    for (const Transaction& tx : result.transactions) {
        txs += std::to_string(tx.id) + "," + format_exact(tx.arrival_time) + "," +
               std::to_string(tx.size) + "," + std::to_string(tx.fee) + "," +
               format_number(tx.fee_per_byte()) + ",";
        if (tx.inclusion)
            txs += "1," + format_exact(tx.inclusion->waiting_time) + "," +
                   std::to_string(tx.inclusion->block_id) + "\n";
        else
            txs += "0,,\n";
    }
    write_file_atomic(out_dir / "transactions.csv", txs);

    std::string blocks = "block_id,creation_time_s,tx_count,used_bytes,fill_rate,collected_fee,miner_id\n";
    for (const Block& b : result.blocks)
        blocks += std::to_string(b.block_id) + "," + format_exact(b.creation_time) + "," +
                  std::to_string(b.tx_ids.size()) + "," + std::to_string(b.used_bytes) + "," +
                  format_number(b.fill_rate) + "," + std::to_string(b.collected_fee) + "," +
                  std::to_string(b.miner_id) + "\n";
    write_file_atomic(out_dir / "blocks.csv", blocks);
    write_file_atomic(out_dir / "trace.csv", format_trace(trace_from_result(result)));
    return result;
}

std::vector<GameReport> cmd_game(const ExperimentSpec& spec, GameMode mode, const fs::path& out_dir) {
    spec.validate();
    ensure_writable_dir(out_dir);
    PayoffOptions options;
    options.common_random_numbers = spec.game.common_random_numbers;
    options.threads = spec.threads;

    std::vector<GameReport> reports;
    for (std::uint64_t capacity : spec.game.capacities) {
        SimConfig cfg = spec.base;
        cfg.capacity = capacity;
        GameReport report{capacity,
                          build_payoff_matrix(cfg, spec.game.strategies, mode,
                                              spec.game.replications, options),
                          {}};
        report.equilibrium = analyze_equilibria(report.payoffs.satoshi);
        reports.push_back(std::move(report));
    }
    for (const GameReport& r : reports) {
        const std::string cap = std::to_string(r.capacity);
        write_file_atomic(out_dir / ("payoff_matrix_" + cap + ".csv"),
                          format_payoff_matrix(r.payoffs.satoshi));
        write_file_atomic(out_dir / ("payoff_share_" + cap + ".csv"),
                          format_payoff_matrix(r.payoffs.share));
        write_file_atomic(out_dir / ("equilibrium_" + cap + ".csv"),
                          format_equilibrium(r.payoffs.satoshi, r.equilibrium));
    }
    return reports;
}

EquilibriumReport cmd_analyze_matrix(const fs::path& matrix_path, const fs::path& out_dir) {
    const PayoffMatrix matrix = load_payoff_matrix(matrix_path);
    ensure_writable_dir(out_dir);
    EquilibriumReport report = analyze_equilibria(matrix);
    write_file_atomic(out_dir / ("equilibrium_" + matrix_path.stem().string() + ".csv"),
                      format_equilibrium(matrix, report));
    return report;
}

std::vector<ValidationRow> run_validation(const TraceArrivals& trace, const ExperimentSpec& spec) {
    spec.validate();
    if (trace.rows.empty()) throw ParseError(0, "trace has no data rows");
    trace.validate();
    const std::size_t n_caps = spec.sweep_capacities.size();
    const std::size_t runs = n_caps * spec.replications;
    std::vector<RunningStats> trace_waits(runs);
    std::vector<RunningStats> synth_waits(runs);

    parallel_for(runs, spec.threads, [&](std::size_t run) {
        SimConfig cfg = spec.base;
        cfg.capacity = spec.sweep_capacities[run / spec.replications];
        cfg.seed = sweep_seed(spec.base.seed, run % spec.replications);
        trace_waits[run] = wait_stats(run_trace_simulation(trace, cfg), cfg.warmup);
        synth_waits[run] = wait_stats(run_simulation(cfg), cfg.warmup);
    });

    std::vector<ValidationRow> rows;
    for (std::size_t c = 0; c < n_caps; ++c) {
        RunningStats t;
        RunningStats s;
        for (std::size_t rep = 0; rep < spec.replications; ++rep) {
            t.merge(trace_waits[c * spec.replications + rep]);
            s.merge(synth_waits[c * spec.replications + rep]);
        }
        ValidationRow row;
        row.capacity = spec.sweep_capacities[c];
        if (t.count() > 0) row.trace_mean_wait_min = t.mean();
        if (s.count() > 0) row.synthetic_mean_wait_min = s.mean();
        if (t.count() > 0 && s.count() > 0 && t.mean() > 0.0)
            row.relative_error = (s.mean() - t.mean()) / t.mean();
        rows.push_back(row);
    }
    return rows;
}

std::string format_validation(const std::vector<ValidationRow>& rows) {
    std::string out = "capacity_bytes,trace_mean_wait_min,synthetic_mean_wait_min,relative_error\n";
    for (const ValidationRow& r : rows)
        out += std::to_string(r.capacity) + "," + optional_number(r.trace_mean_wait_min) + "," +
               optional_number(r.synthetic_mean_wait_min) + "," + optional_number(r.relative_error) +
               "\n";
    return out;
}

std::vector<ValidationRow> cmd_validate(const fs::path& trace_path, const ExperimentSpec& spec,
                                        const fs::path& out_dir) {
    spec.validate();
    const TraceArrivals trace = load_trace(trace_path);
    ensure_writable_dir(out_dir);
    std::vector<ValidationRow> rows = run_validation(trace, spec);
    write_file_atomic(out_dir / "validation.csv", format_validation(rows));
    return rows;
}

}  // namespace mempoolsim
