#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dejd/model.hpp"
#include "dejd/prior.hpp"

namespace dejd {

enum class LSampler { metropolis_hastings, acceptance_rejection, auto_select };

LSampler l_sampler_from_name(std::string_view name);
std::string to_string(LSampler s);

struct ChainConfig {
    std::int64_t burn_in = 0;
    std::int64_t draws = 1;
    std::int64_t thin = 1;
    LSampler l_sampler = LSampler::auto_select;
    std::uint64_t seed = 0;
    std::optional<ModelParams> init;  // empty: initialize from a prior draw
    bool store_full_latents = false;

    void validate() const;
};

struct AcceptanceStats {
    std::uint64_t l_mh_proposed = 0;
    std::uint64_t l_mh_accepted = 0;
    std::uint64_t l_ar_attempts = 0;
    std::uint64_t l_ar_draws = 0;
    std::uint64_t l_ar_fallbacks = 0;
};

struct Draw {
    std::int64_t sweep_index;  // 1-based, counted after burn-in
    ModelParams params;
    std::int64_t n_minus1;
    std::int64_t n_plus1;
};

struct Chain {
    std::vector<Draw> samples;
    ChainConfig config;
    double delta = kTradingDayDelta;
    AcceptanceStats acceptance;

    // Per-day counts of xi = -1 / +1 over retained draws. Empty when a chain
    // is rebuilt from a draws file that carries no latent information.
    Eigen::Vector<std::int64_t, Eigen::Dynamic> xi_minus_counts;
    Eigen::Vector<std::int64_t, Eigen::Dynamic> xi_plus_counts;

    // Populated only under store_full_latents.
    std::vector<LatentState> latent_draws;

    bool has_latent_accumulators() const { return xi_minus_counts.size() > 0; }
    std::int64_t retained() const { return static_cast<std::int64_t>(samples.size()); }
};

// --- Full conditionals ---
// The closed-form conditional parameter tuples are exposed separately from
// the draw functions so conjugacy can be checked without sampling.

struct MuHConditional {
    double h_shape;
    double h_rate;
    double mu_mean;
    double mu_precision_factor;  // var(mu' | h) = 1 / (h * mu_precision_factor)
};

MuHConditional mu_h_conditional(const SufficientStats& stats, const PriorSpec& spec,
                                double delta);

struct BetaParams {
    double a;
    double b;
};

BetaParams p_U_conditional(const SufficientStats& stats, const PriorSpec& spec);

struct EtaConditional {
    double shape_D;
    double rate_D;
    double shape_U;
    double rate_U;
};

EtaConditional eta_conditional(const SufficientStats& stats, const PriorSpec& spec);

struct MuHDraw {
    double mu_prime;
    double h;
};

/// Joint gamma-normal conditional of (mu', h).
MuHDraw draw_mu_h(const SufficientStats& stats, const PriorSpec& spec, double delta,
                  RngStream& rng);

/// Log acceptance ratio of the independence MH step for L, clamped at 0.
double l_mh_log_acceptance(double proposed, double current, std::int64_t n);

struct LMhDraw {
    double L;
    bool accepted;
};

/// Independence Metropolis-Hastings step for L: propose (2n+1)L' ~ ChiSquare(2N + nu_L),
/// accept with min{ exp(n(L'-L)) (1+L')^-n (1+L)^n, 1 }.
LMhDraw draw_L_mh(double current_L, std::int64_t N, std::int64_t n, double nu_L,
                  RngStream& rng);

/// The condition n - N - nu_L/2 > 0 under which the gamma-gamma
/// acceptance-rejection proposal for L exists.
bool l_ar_precondition(std::int64_t N, std::int64_t n, double nu_L);

/// Exact draw of L by acceptance-rejection from a gamma-gamma proposal with
/// acceptance probability exp(-L/2). Returns an empty optional — the
/// fallback-required signal — when the precondition fails or the attempt
/// budget is exhausted (possible only when N is nearly n and the proposal
/// mass sits far from the target); the caller then uses draw_L_mh.
std::optional<double> draw_L_ar(std::int64_t N, std::int64_t n, double nu_L,
                                RngStream& rng, std::uint64_t* attempts = nullptr,
                                std::uint64_t max_attempts = 100000);

double draw_p_U(const SufficientStats& stats, const PriorSpec& spec, RngStream& rng);

struct EtaDraw {
    double eta_D;
    double eta_U;
};

EtaDraw draw_etas(const SufficientStats& stats, const PriorSpec& spec, RngStream& rng);

struct XiPosterior {
    double p_minus;
    double p_zero;
    double p_plus;
};

/// Posterior regime probabilities for one observation, normalized in log space.
XiPosterior xi_posterior(double x_i, const ModelParams& params, double delta);

struct XiJDraw {
    int xi;
    double J;
};

XiJDraw draw_xi_J(double x_i, const ModelParams& params, double delta, RngStream& rng);

struct GibbsState {
    ModelParams params;
    LatentState latents;
};

/// One full Gibbs cycle in fixed order: latents, sufficient stats, (mu', h),
/// L, p_U, (eta_D, eta_U).
GibbsState sweep(const ReturnsSeries& x, GibbsState state, const PriorSpec& spec,
                 const ChainConfig& cfg, RngStream& rng, AcceptanceStats* stats = nullptr);

Chain run_chain(const ReturnsSeries& x, const PriorSpec& spec, const ChainConfig& cfg);

}  // namespace dejd
