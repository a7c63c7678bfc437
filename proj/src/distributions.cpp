#include "dejd/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dejd/errors.hpp"

namespace dejd {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;  // log(2*pi)
constexpr double kSqrt1_2 = std::numbers::sqrt2 / 2.0;
constexpr double kTiny = std::numeric_limits<double>::min();

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// One standard normal variate; consumes exactly two uniforms.
double std_normal(RngStream& rng) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Tail sampler of Robert (1995): standard normal conditioned on z > a, a >= 0.
double std_normal_tail_above(double a, RngStream& rng) {
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double z = a - std::log(rng.uniform01()) / lambda;
        const double d = z - lambda;
        if (std::log(rng.uniform01()) < -0.5 * d * d) return z;
    }
}

// Standard normal conditioned on z < alpha.
double std_normal_below(double alpha, RngStream& rng) {
    if (alpha < -4.0) return -std_normal_tail_above(-alpha, rng);
    const double p = rng.uniform01() * normal_cdf(alpha);
    return normal_quantile(p);
}

double std_gamma(double shape, RngStream& rng);

// Marsaglia-Tsang for shape >= 1.
double std_gamma_ge1(double shape, RngStream& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, t;
        do {
            z = std_normal(rng);
            t = 1.0 + c * z;
        } while (t <= 0.0);
        const double v = t * t * t;
        const double u = rng.uniform01();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double std_gamma(double shape, RngStream& rng) {
    if (shape < 1.0) {
        // Boost a shape+1 draw down; keeps fractional shapes (even ~0.02) exact.
        const double g = std_gamma_ge1(shape + 1.0, rng);
        const double u = rng.uniform01();
        return g * std::pow(u, 1.0 / shape);
    }
    return std_gamma_ge1(shape, rng);
}

}  // namespace

void GammaGammaParams::validate() const {
    require(std::isfinite(alpha) && alpha > 0.0, "gamma-gamma: alpha must be > 0");
    require(std::isfinite(beta) && beta > 0.0, "gamma-gamma: beta must be > 0");
    require(std::isfinite(n) && n > 0.0, "gamma-gamma: n must be > 0");
}

double normal_sample(double mean, double variance, RngStream& rng) {
    require(std::isfinite(mean), "normal: mean must be finite");
    require(std::isfinite(variance) && variance > 0.0, "normal: variance must be > 0");
    return mean + std::sqrt(variance) * std_normal(rng);
}

double truncated_normal_sample(double mean, double variance, TruncationSide side,
                               RngStream& rng) {
    require(std::isfinite(mean), "truncated normal: mean must be finite");
    require(std::isfinite(variance) && variance > 0.0,
            "truncated normal: variance must be > 0");
    const double sd = std::sqrt(variance);
    const double alpha = -mean / sd;  // truncation point 0, standardized
    if (side == TruncationSide::negative) {
        const double r = mean + sd * std_normal_below(alpha, rng);
        return r < 0.0 ? r : -kTiny;
    }
    const double r = mean - sd * std_normal_below(-alpha, rng);
    return r > 0.0 ? r : kTiny;
}

double gamma_sample(double shape, double rate, RngStream& rng) {
    require(std::isfinite(shape) && shape > 0.0, "gamma: shape must be > 0");
    require(std::isfinite(rate) && rate > 0.0, "gamma: rate must be > 0");
    const double x = std_gamma(shape, rng) / rate;
    // A heavily fractional shape can underflow; keep the support open at 0.
    return x > kTiny ? x : kTiny;
}

double beta_sample(double a, double b, RngStream& rng) {
    require(std::isfinite(a) && a > 0.0, "beta: a must be > 0");
    require(std::isfinite(b) && b > 0.0, "beta: b must be > 0");
    const double x = gamma_sample(a, 1.0, rng);
    const double y = gamma_sample(b, 1.0, rng);
    double p = x / (x + y);
    if (p <= 0.0) p = kTiny;
    const double one_minus = std::nextafter(1.0, 0.0);
    if (p >= 1.0) p = one_minus;
    return p;
}

double exponential_sample(double rate, RngStream& rng) {
    require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
    return -std::log(rng.uniform01()) / rate;
}

double gamma_gamma_sample(const GammaGammaParams& p, RngStream& rng) {
    p.validate();
    const double lambda = gamma_sample(p.alpha, p.beta, rng);
    return gamma_sample(p.n, lambda, rng);
}

double double_exp_pdf(double x, double p_up, double eta_up, double eta_down) {
    require(std::isfinite(p_up) && p_up > 0.0 && p_up < 1.0,
            "double exponential: p_up must be in (0,1)");
    require(std::isfinite(eta_up) && eta_up > 0.0, "double exponential: eta_up must be > 0");
    require(std::isfinite(eta_down) && eta_down > 0.0,
            "double exponential: eta_down must be > 0");
    if (x < 0.0) return (1.0 - p_up) * eta_down * std::exp(eta_down * x);
    return p_up * eta_up * std::exp(-eta_up * x);
}

double normal_log_pdf(double x, double mean, double variance) {
    require(std::isfinite(variance) && variance > 0.0, "normal: variance must be > 0");
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(variance)) - 0.5 * d * d / variance;
}

double std_normal_log_cdf(double z) {
    if (z < -20.0) {
        // Mills-ratio asymptotic: Phi(z) = phi(z)/(-z) (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8).
        // erfc underflows near z = -38; this branch stays accurate arbitrarily deep.
        const double zz = z * z;
        const double series = 1.0 + (-1.0 + (3.0 + (-15.0 + 105.0 / zz) / zz) / zz) / zz;
        return -0.5 * zz - 0.5 * kLog2Pi - std::log(-z) + std::log(series);
    }
    if (z > 8.0) {
        const double q = 0.5 * std::erfc(z * kSqrt1_2);
        return std::log1p(-q);
    }
    return std::log(0.5 * std::erfc(-z * kSqrt1_2));
}

double normal_log_cdf(double x, double mean, double variance) {
    require(std::isfinite(variance) && variance > 0.0, "normal: variance must be > 0");
    return std_normal_log_cdf((x - mean) / std::sqrt(variance));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kSqrt1_2); }

double normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "normal quantile: p must be in (0,1)");
    // Acklam's rational approximation, then one Halley polish.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double log_sum_exp(double a, double b) {
    const double m = a > b ? a : b;
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double log_sum_exp(double a, double b, double c) {
    double m = a > b ? a : b;
    if (c > m) m = c;
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

}  // namespace dejd
