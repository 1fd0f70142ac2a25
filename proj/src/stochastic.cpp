#include "mempoolsim/stochastic.hpp"

#include "mempoolsim/errors.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mempoolsim {

IntensityFunction IntensityFunction::constant(double rate, double lambda_max) {
    IntensityFunction f;
    f.kind = IntensityKind::Constant;
    f.lambda_lo = rate;
    f.lambda_hi = rate;
    f.lambda_max = lambda_max;
    return f;
}

IntensityFunction IntensityFunction::sinusoid(double lo, double hi, double period,
                                              double lambda_max) {
    IntensityFunction f;
    f.kind = IntensityKind::Sinusoid;
    f.lambda_lo = lo;
    f.lambda_hi = hi;
    f.period = period;
    f.lambda_max = lambda_max;
    return f;
}

IntensityFunction IntensityFunction::linear_ramp(double lo, double hi, double duration,
                                                 double lambda_max) {
    IntensityFunction f;
    f.kind = IntensityKind::LinearRamp;
    f.lambda_lo = lo;
    f.lambda_hi = hi;
    f.ramp_duration = duration;
    f.lambda_max = lambda_max;
    return f;
}

void IntensityFunction::validate() const {
    if (!(lambda_lo >= 0.0)) throw ConfigError("lambda_lo", "must be >= 0");
    if (kind == IntensityKind::Constant && lambda_hi != lambda_lo)
        throw ConfigError("lambda_hi", "must equal lambda_lo for a constant intensity");
    if (!(lambda_hi >= lambda_lo)) throw ConfigError("lambda_hi", "must be >= lambda_lo");
    if (!std::isfinite(lambda_max) || !(lambda_max > 0.0))
        throw ConfigError("lambda_max", "must be a positive finite rate");
    // lambda(t) never leaves [lo, hi], so this is the thinning precondition.
    if (lambda_hi > lambda_max)
        throw ConfigError("lambda_max", "intensity exceeds the thinning bound");
    if (kind == IntensityKind::Sinusoid && !(period > 0.0))
        throw ConfigError("period", "must be > 0");
    if (kind == IntensityKind::LinearRamp && !(ramp_duration > 0.0))
        throw ConfigError("ramp_duration", "must be > 0");
}

double IntensityFunction::mean_rate(double horizon) const {
    switch (kind) {
    case IntensityKind::Constant:
        return lambda_lo;
    case IntensityKind::Sinusoid: {
        const double mid = 0.5 * (lambda_lo + lambda_hi);
        const double half = 0.5 * (lambda_hi - lambda_lo);
        const double w = 2.0 * std::numbers::pi / period;
        return mid + half * (1.0 - std::cos(w * horizon)) / (w * horizon);
    }
    case IntensityKind::LinearRamp: {
        const double slope = (lambda_hi - lambda_lo) / ramp_duration;
        if (horizon <= ramp_duration) return lambda_lo + 0.5 * slope * horizon;
        const double ramp_area = 0.5 * (lambda_lo + lambda_hi) * ramp_duration;
        return (ramp_area + lambda_hi * (horizon - ramp_duration)) / horizon;
    }
    }
    return lambda_lo;
}

double evaluate_intensity(const IntensityFunction& intensity, double t) {
    switch (intensity.kind) {
    case IntensityKind::Constant:
        return intensity.lambda_lo;
    case IntensityKind::Sinusoid: {
        const double mid = 0.5 * (intensity.lambda_lo + intensity.lambda_hi);
        const double half = 0.5 * (intensity.lambda_hi - intensity.lambda_lo);
        const double value = mid + half * std::sin(2.0 * std::numbers::pi * t / intensity.period);
        return std::clamp(value, intensity.lambda_lo, intensity.lambda_hi);
    }
    case IntensityKind::LinearRamp: {
        const double frac = std::clamp(t / intensity.ramp_duration, 0.0, 1.0);
        return intensity.lambda_lo + frac * (intensity.lambda_hi - intensity.lambda_lo);
    }
    }
    return intensity.lambda_lo;
}

std::vector<double> sample_arrival_times(const IntensityFunction& intensity, double horizon,
                                         RandomStream& rng, ThinningStats& stats) {
    intensity.validate();
    if (!(horizon > 0.0)) throw ConfigError("horizon", "must be > 0");

    std::vector<double> accepted;
    accepted.reserve(static_cast<std::size_t>(intensity.mean_rate(horizon) * horizon * 1.05) + 16);
    double s = 0.0;
    while (true) {
        s += rng.exponential(intensity.lambda_max);
        if (s > horizon) break;
        ++stats.candidates;
        const double d = rng.uniform();
        if (d <= evaluate_intensity(intensity, s) / intensity.lambda_max) {
            // Exponential gaps can round to zero only at absurd rates; keep strictness.
            if (accepted.empty() || s > accepted.back()) {
                accepted.push_back(s);
                ++stats.accepted;
            }
        }
    }
    return accepted;
}

std::vector<double> sample_arrival_times(const IntensityFunction& intensity, double horizon,
                                         RandomStream& rng) {
    ThinningStats stats;
    return sample_arrival_times(intensity, horizon, rng, stats);
}

void AttributeModel::validate() const {
    if (!(fee_sigma_log > 0.0)) throw ConfigError("fee_sigma_log", "must be > 0");
    if (!(size_sigma_log > 0.0)) throw ConfigError("size_sigma_log", "must be > 0");
    if (!std::isfinite(fee_mu_log)) throw ConfigError("fee_mu_log", "must be finite");
    if (!std::isfinite(size_mu_log)) throw ConfigError("size_mu_log", "must be finite");
    if (!(std::abs(copula_rho) < 1.0)) throw ConfigError("copula_rho", "must lie in (-1, 1)");
    if (min_size < 1) throw ConfigError("min_size", "must be >= 1");
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    using DoublePolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p, DoublePolicy{});
}

double lognormal_quantile(double p, double mu_log, double sigma_log) {
    return std::exp(mu_log + sigma_log * normal_quantile(p));
}

AttributePair sample_attribute_pair(const AttributeModel& model, RandomStream& rng) {
    // Box-Muller pair, then impose the copula correlation.
    const double r = std::sqrt(-2.0 * std::log(rng.uniform()));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double z1 = r * std::cos(theta);
    const double z2 = r * std::sin(theta);
    const double rho = model.copula_rho;
    const double z_fee = z1;
    const double z_size = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;

    // Clamp keeps the quantile finite when a uniform rounds to 0 or 1.
    constexpr double lo = 0x1.0p-60;
    constexpr double hi = 1.0 - 0x1.0p-53;
    const double u_fee = std::clamp(normal_cdf(z_fee), lo, hi);
    const double u_size = std::clamp(normal_cdf(z_size), lo, hi);

    const double fee = lognormal_quantile(u_fee, model.fee_mu_log, model.fee_sigma_log);
    const double size = lognormal_quantile(u_size, model.size_mu_log, model.size_sigma_log);

    AttributePair out;
    out.fee = std::max<std::int64_t>(1, std::llround(fee));
    const double bytes = std::ceil(size);
    out.size = bytes >= 4.0e9 ? 4'000'000'000U
                              : std::max(model.min_size, static_cast<std::uint32_t>(bytes));
    return out;
}

}  // namespace mempoolsim
