#pragma once

#include "mempoolsim/random_stream.hpp"

#include <cstdint>
#include <vector>

namespace mempoolsim {

enum class IntensityKind { Constant, Sinusoid, LinearRamp };

/// Arrival rate lambda(t) in transactions per second, together with the
/// bound used for thinning.
struct IntensityFunction {
    IntensityKind kind = IntensityKind::Sinusoid;
    double lambda_lo = 3.0;
    double lambda_hi = 3.3;
    /// Sinusoid period, seconds.
    double period = 3600.0;
    /// LinearRamp duration, seconds; the rate is clamped at lambda_hi afterwards.
    double ramp_duration = 30.0 * 86400.0;
    /// Thinning bound; must dominate lambda(t) everywhere.
    double lambda_max = 7.2;

    static IntensityFunction constant(double rate, double lambda_max);
    static IntensityFunction sinusoid(double lo, double hi, double period, double lambda_max);
    static IntensityFunction linear_ramp(double lo, double hi, double duration, double lambda_max);

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Time average of lambda(t) over [0, horizon], in closed form.
    double mean_rate(double horizon) const;

    bool operator==(const IntensityFunction&) const = default;
};

double evaluate_intensity(const IntensityFunction& intensity, double t);

/// Lewis-Shedler thinning: homogeneous Poisson(lambda_max) candidates,
/// each kept with probability lambda(s)/lambda_max. Returns the accepted
/// timestamps in (0, horizon], strictly increasing.
std::vector<double> sample_arrival_times(const IntensityFunction& intensity, double horizon,
                                         RandomStream& rng);

/// Thinning diagnostics, for tests and reports.
struct ThinningStats {
    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
};

std::vector<double> sample_arrival_times(const IntensityFunction& intensity, double horizon,
                                         RandomStream& rng, ThinningStats& stats);

/// Lognormal fee and size marginals coupled by a Gaussian copula.
struct AttributeModel {
    double fee_mu_log = 9.0;
    double fee_sigma_log = 1.0;
    double size_mu_log = 5.95;
    double size_sigma_log = 0.6;
    double copula_rho = 0.2;
    std::uint32_t min_size = 150;

    void validate() const;

    bool operator==(const AttributeModel&) const = default;
};

struct AttributePair {
    std::int64_t fee = 0;     // satoshi
    std::uint32_t size = 0;   // bytes
};

/// Standard normal CDF and its inverse.
double normal_cdf(double z);
double normal_quantile(double p);

double lognormal_quantile(double p, double mu_log, double sigma_log);

/// Gaussian-copula draw: correlated standard normals -> uniforms ->
/// lognormal inverse CDFs. Fee is rounded to the nearest satoshi (at least 1);
/// size is rounded up to whole bytes and floored at min_size.
AttributePair sample_attribute_pair(const AttributeModel& model, RandomStream& rng);

}  // namespace mempoolsim
