#pragma once

#include "mempoolsim/engine.hpp"
#include "mempoolsim/game.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mempoolsim::testing {

struct PropertyResult {
    bool ok = true;
    std::string detail;
};

/// Asymptotic Kolmogorov tail probability for statistic `d` at effective
/// sample size `n` (Stephens' small-sample adjustment).
double ks_p_value(double d, double n);

/// One-sample KS statistic against Exp(rate).
double ks_statistic_exponential(std::vector<double> sample, double rate);

/// Two-sample KS statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

double pearson(std::span<const double> x, std::span<const double> y);

/// Inter-arrival gaps of a sorted timestamp list, starting from zero.
std::vector<double> gaps(std::span<const double> times, std::size_t limit);

/// Constant(3.0) thinned from bound 6.0 against a directly generated
/// homogeneous Poisson(3.0) process, two-sample KS on 10^4 inter-arrivals.
PropertyResult thinning_matches_direct_poisson(std::uint64_t seed);

/// Pearson correlation of (log fee, log size) over `draws` pairs lies within
/// `tolerance` of rho.
PropertyResult copula_log_correlation(double rho, std::size_t draws, double tolerance,
                                      std::uint64_t seed);

/// select_block, indexed and unindexed, against an independent
/// sort-then-walk oracle on random instances for every strategy.
PropertyResult select_block_matches_scan_oracle(std::size_t instances, std::uint64_t seed);

/// find_pure_nash, find_dominant_strategies and best_response against
/// exhaustive enumeration on random matrices of size 1..5.
PropertyResult nash_matches_enumeration(std::size_t matrices, std::uint64_t seed);

/// Collected plus pending fees equal all arrival fees, and the result
/// passes check_result.
PropertyResult fee_conservation(const SimResult& result);

/// Random transactions for packing tests; sizes in [1, max_size], fees in
/// [1, max_fee], arrival times drawn from a few values so ties occur.
std::vector<Transaction> random_transactions(RandomStream& rng, std::size_t count,
                                             std::uint32_t max_size, std::int64_t max_fee);

/// The packing oracle: stable order by the strategy key (compared by double
/// products, exact for the ranges used), arrival time, id; then a walk with
/// a running remaining-capacity counter.
std::vector<TxId> oracle_select(std::vector<Transaction> txs, std::uint64_t capacity,
                                Strategy strategy);

/// Random payoff matrix with small integer payoffs so ties are common.
PayoffMatrix random_matrix(RandomStream& rng, std::size_t n, int max_payoff);

std::vector<std::pair<std::size_t, std::size_t>> oracle_pure_nash(const PayoffMatrix& m);

}  // namespace mempoolsim::testing
