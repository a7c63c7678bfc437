#pragma once

#include "dejd/rng.hpp"

namespace dejd {

enum class TruncationSide { negative, positive };

/// Parameters of the gamma-gamma distribution with density
///   x -> [beta^alpha / Gamma(alpha)] [Gamma(alpha+n) / Gamma(n)]
///        x^(n-1) / (beta + x)^(alpha+n)   on (0, inf).
struct GammaGammaParams {
    double alpha;
    double beta;
    double n;

    void validate() const;
};

double normal_sample(double mean, double variance, RngStream& rng);

/// One-sided truncated normal draw: the N(mean, variance) law restricted to
/// (-inf, 0) or (0, inf). Stable even when the kept region lies many
/// standard deviations into the tail (exponential-proposal rejection there,
/// inverse CDF in the bulk).
double truncated_normal_sample(double mean, double variance, TruncationSide side,
                               RngStream& rng);

/// Gamma draw with density proportional to x^(shape-1) exp(-rate x).
/// Fractional shapes below 1 are supported.
double gamma_sample(double shape, double rate, RngStream& rng);

double beta_sample(double a, double b, RngStream& rng);

double exponential_sample(double rate, RngStream& rng);

double gamma_gamma_sample(const GammaGammaParams& p, RngStream& rng);

/// Double exponential jump density: p_D eta_D exp(eta_D x) for x < 0 and
/// p_U eta_U exp(-eta_U x) for x >= 0 (x = 0 belongs to the upward branch).
double double_exp_pdf(double x, double p_up, double eta_up, double eta_down);

double normal_log_pdf(double x, double mean, double variance);

/// log Phi((x - mean)/sd). Accurate deep into the lower tail (40+ sd),
/// switching to the Mills-ratio asymptotic series where erfc underflows.
double normal_log_cdf(double x, double mean, double variance);

/// Standard normal log CDF, CDF and quantile.
double std_normal_log_cdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

double log_sum_exp(double a, double b);
double log_sum_exp(double a, double b, double c);

}  // namespace dejd
