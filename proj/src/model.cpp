#include "dejd/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dejd/distributions.hpp"

namespace dejd {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

ModelParams ModelParams::from_moments(double mu, double sigma, double lambda,
                                      double p_U, double eta_U, double eta_D,
                                      double delta) {
    require(std::isfinite(sigma) && sigma > 0.0, "model: sigma must be > 0");
    require(std::isfinite(lambda) && lambda > 0.0, "model: lambda must be > 0");
    require(std::isfinite(delta) && delta > 0.0, "model: delta must be > 0");
    ModelParams p{mu - 0.5 * sigma * sigma, 1.0 / (sigma * sigma), lambda * delta,
                  p_U, eta_U, eta_D};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    require(std::isfinite(mu_prime), "model: mu_prime must be finite");
    require(std::isfinite(h) && h > 0.0, "model: h must be > 0");
    require(std::isfinite(L) && L > 0.0, "model: L must be > 0");
    require(std::isfinite(p_U) && p_U > 0.0 && p_U < 1.0, "model: p_U must be in (0,1)");
    require(std::isfinite(eta_U) && eta_U > 0.0, "model: eta_U must be > 0");
    require(std::isfinite(eta_D) && eta_D > 0.0, "model: eta_D must be > 0");
}

void ReturnsSeries::validate() const {
    require(values.size() >= 1, "returns series: at least one observation required");
    require(std::isfinite(delta) && delta > 0.0, "returns series: delta must be > 0");
    require(values.allFinite(), "returns series: all values must be finite");
}

void LatentState::validate() const {
    require(xi.size() == J.size(), "latent state: length mismatch");
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        switch (xi[i]) {
            case -1:
                require(J[i] < 0.0, "latent state: xi = -1 requires J < 0");
                break;
            case 0:
                require(J[i] == 0.0, "latent state: xi = 0 requires J = 0");
                break;
            case 1:
                require(J[i] > 0.0, "latent state: xi = +1 requires J > 0");
                break;
            default:
                throw std::invalid_argument("latent state: xi must be in {-1,0,1}");
        }
    }
}

double diffusion_log_pdf(double x, const ModelParams& params, double delta) {
    return normal_log_pdf(x, params.mu_prime * delta, delta / params.h);
}

double diffusion_pdf(double x, const ModelParams& params, double delta) {
    return std::exp(diffusion_log_pdf(x, params, delta));
}

double jump_diffusion_log_pdf(double x, const ModelParams& params, double delta) {
    const double d = params.mu_prime * delta;
    const double v = delta / params.h;  // sigma^2 delta
    const double sd = std::sqrt(v);
    // Closed form of the normal * one-sided-exponential convolution,
    // assembled in log space; the Phi arguments can be far in the tails.
    const double log_down = std::log(params.eta_D) + params.eta_D * x - d * params.eta_D +
                            0.5 * v * params.eta_D * params.eta_D +
                            std_normal_log_cdf(-(x - (d - v * params.eta_D)) / sd) +
                            std::log(params.p_D());
    const double log_up = std::log(params.eta_U) - params.eta_U * x + d * params.eta_U +
                          0.5 * v * params.eta_U * params.eta_U +
                          std_normal_log_cdf((x - (d + v * params.eta_U)) / sd) +
                          std::log(params.p_U);
    return log_sum_exp(log_down, log_up);
}

double jump_diffusion_pdf(double x, const ModelParams& params, double delta) {
    return std::exp(jump_diffusion_log_pdf(x, params, delta));
}

double jump_weight(double L) { return L / (1.0 + L); }

double diffusion_weight(double L) { return 1.0 - jump_weight(L); }

double dejd_log_pdf(double x, const ModelParams& params, double delta) {
    const double log_w0 = -std::log1p(params.L);
    const double log_w1 = std::log(params.L) - std::log1p(params.L);
    return log_sum_exp(log_w0 + diffusion_log_pdf(x, params, delta),
                       log_w1 + jump_diffusion_log_pdf(x, params, delta));
}

double dejd_pdf(double x, const ModelParams& params, double delta) {
    return std::exp(dejd_log_pdf(x, params, delta));
}

double kou_to_dejd_intensity(double lambda_kou, double delta) {
    require(std::isfinite(lambda_kou) && lambda_kou > 0.0, "kou intensity must be > 0");
    require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    if (lambda_kou * delta >= 1.0) {
        throw std::domain_error(
            "kou_to_dejd_intensity: lambda * delta must be < 1 (the Kou diffusion "
            "weight 1 - lambda*delta would not be positive)");
    }
    return lambda_kou / (1.0 - lambda_kou * delta);
}

double dejd_to_kou_intensity(double lambda_dejd, double delta) {
    require(std::isfinite(lambda_dejd) && lambda_dejd > 0.0, "dejd intensity must be > 0");
    require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    return lambda_dejd / (1.0 + lambda_dejd * delta);
}

double conditional_log_likelihood(const ReturnsSeries& x, const ModelParams& params,
                                  const LatentState& latents) {
    require(latents.xi.size() == x.n() && latents.J.size() == x.n(),
            "conditional likelihood: latent length mismatch");
    const double mean_shift = params.mu_prime * x.delta;
    const double variance = x.delta / params.h;
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * variance);
    CompensatedSum quad;
    for (Eigen::Index i = 0; i < x.n(); ++i) {
        const double r = x.values[i] - mean_shift - latents.J[i];
        quad.add(r * r);
    }
    return static_cast<double>(x.n()) * log_norm - 0.5 * quad.value() / variance;
}

SufficientStats sufficient_stats(const ReturnsSeries& x, const LatentState& latents) {
    require(latents.xi.size() == x.n() && latents.J.size() == x.n(),
            "sufficient stats: latent length mismatch");
    SufficientStats st;
    st.n = x.n();

    CompensatedSum sum_x, sum_j;
    for (Eigen::Index i = 0; i < st.n; ++i) {
        sum_x.add(x.values[i]);
        sum_j.add(latents.J[i]);
        switch (latents.xi[i]) {
            case -1:
                ++st.n_minus1;
                st.N_DJ += latents.J[i];
                break;
            case 1:
                ++st.n_plus1;
                st.N_UJ += latents.J[i];
                break;
            default:
                ++st.n_0;
                break;
        }
    }
    const double n = static_cast<double>(st.n);
    st.xbar = sum_x.value() / n;
    st.jbar = sum_j.value() / n;

    const double center = st.xbar - st.jbar;
    CompensatedSum sum_sq;
    for (Eigen::Index i = 0; i < st.n; ++i) {
        const double r = x.values[i] - latents.J[i] - center;
        sum_sq.add(r * r);
    }
    st.s = sum_sq.value() / n;
    return st;
}

SimulatedPath simulate(const ModelParams& params, Eigen::Index n, double delta,
                       RngStream& rng) {
    params.validate();
    require(n >= 1, "simulate: n must be >= 1");
    require(std::isfinite(delta) && delta > 0.0, "simulate: delta must be > 0");

    const double w_jump = params.L / (1.0 + params.L);
    const double w_minus = w_jump * params.p_D();
    const double w_zero = 1.0 / (1.0 + params.L);
    const double mean_shift = params.mu_prime * delta;
    const double sd = std::sqrt(delta / params.h);

    SimulatedPath path;
    path.returns.values.resize(n);
    path.returns.delta = delta;
    path.latents.xi.resize(n);
    path.latents.J.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        int xi;
        double J;
        if (u < w_minus) {
            xi = -1;
            J = -exponential_sample(params.eta_D, rng);
        } else if (u < w_minus + w_zero) {
            xi = 0;
            J = 0.0;
        } else {
            xi = 1;
            J = exponential_sample(params.eta_U, rng);
        }
        path.latents.xi[i] = xi;
        path.latents.J[i] = J;
        path.returns.values[i] = normal_sample(mean_shift + J, sd * sd, rng);
    }
    return path;
}

}  // namespace dejd
