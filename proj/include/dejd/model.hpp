#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "dejd/rng.hpp"

namespace dejd {

inline constexpr double kTradingDayDelta = 1.0 / 252.0;

/// Model state in the sampling parametrization:
/// mu' = mu - sigma^2/2, h = 1/sigma^2, L = lambda * delta.
struct ModelParams {
    double mu_prime;  // annualized drift of the log-price
    double h;         // diffusion precision
    double L;         // per-step jump weight
    double p_U;       // probability an occurring jump is upward
    double eta_U;     // upward jump rate (mean up-jump 1/eta_U)
    double eta_D;     // downward jump rate (mean down-jump magnitude 1/eta_D)

    double sigma() const { return 1.0 / std::sqrt(h); }
    double mu() const { return mu_prime + 0.5 / h; }
    double lambda(double delta) const { return L / delta; }
    double p_D() const { return 1.0 - p_U; }

    static ModelParams from_moments(double mu, double sigma, double lambda,
                                    double p_U, double eta_U, double eta_D,
                                    double delta);

    void validate() const;
};

/// Ordered daily log-returns with their fixed time step.
struct ReturnsSeries {
    Eigen::VectorXd values;
    double delta = kTradingDayDelta;

    Eigen::Index n() const { return values.size(); }
    void validate() const;
};

/// Per-observation regime labels (-1 down-jump, 0 no jump, +1 up-jump)
/// and jump sizes. J_i is exactly 0 iff xi_i is 0.
struct LatentState {
    Eigen::VectorXi xi;
    Eigen::VectorXd J;

    Eigen::Index n() const { return xi.size(); }
    void validate() const;
};

/// The reductions every full conditional needs, computed in one pass.
struct SufficientStats {
    double xbar = 0.0;  // mean of x
    double jbar = 0.0;  // mean of J
    double s = 0.0;     // mean of (x_i - J_i - (xbar - jbar))^2
    Eigen::Index n = 0;
    Eigen::Index n_minus1 = 0;
    Eigen::Index n_0 = 0;
    Eigen::Index n_plus1 = 0;
    double N_DJ = 0.0;  // sum of negative jump sizes, <= 0
    double N_UJ = 0.0;  // sum of positive jump sizes, >= 0

    Eigen::Index jump_count() const { return n_minus1 + n_plus1; }
};

/// Mixture weights of the one-step density: L/(1+L) on the jump-diffusion
/// component; the pair sums to 1 exactly.
double jump_weight(double L);
double diffusion_weight(double L);

// Mixture components of the one-step return density and the mixture itself.
double diffusion_log_pdf(double x, const ModelParams& params, double delta);
double diffusion_pdf(double x, const ModelParams& params, double delta);
double jump_diffusion_log_pdf(double x, const ModelParams& params, double delta);
double jump_diffusion_pdf(double x, const ModelParams& params, double delta);
double dejd_log_pdf(double x, const ModelParams& params, double delta);
double dejd_pdf(double x, const ModelParams& params, double delta);

/// Intensity conversions between the Kou weighting (1 - lambda delta,
/// lambda delta) and the DEJD weighting (1/(1+lambda delta), ...).
double kou_to_dejd_intensity(double lambda_kou, double delta);
double dejd_to_kou_intensity(double lambda_dejd, double delta);

double conditional_log_likelihood(const ReturnsSeries& x, const ModelParams& params,
                                  const LatentState& latents);

SufficientStats sufficient_stats(const ReturnsSeries& x, const LatentState& latents);

struct SimulatedPath {
    ReturnsSeries returns;
    LatentState latents;
};

/// Draw a synthetic series from the one-jump-per-step model together with
/// its ground-truth latents.
SimulatedPath simulate(const ModelParams& params, Eigen::Index n, double delta,
                       RngStream& rng);

}  // namespace dejd
