#include "dejd/gibbs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dejd/distributions.hpp"
#include "dejd/errors.hpp"

namespace dejd {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Per-theta constants of the latent-update kernel, hoisted out of the
// per-observation loop.
struct XiContext {
    double d;            // mu' delta
    double v;            // delta / h = sigma^2 delta
    double inv_sd;
    double log_diff_norm;
    double c_down;       // x-independent part of the down-jump log weight
    double c_up;
    double shift_down;   // Phi-argument center, d - v eta_D
    double shift_up;     // d + v eta_U
    double eta_D;
    double eta_U;
};

XiContext make_xi_context(const ModelParams& p, double delta) {
    XiContext ctx;
    ctx.d = p.mu_prime * delta;
    ctx.v = delta / p.h;
    const double sd = std::sqrt(ctx.v);
    ctx.inv_sd = 1.0 / sd;
    ctx.log_diff_norm = -std::log(sd) - 0.9189385332046727;  // log sqrt(2 pi)
    const double log_L = std::log(p.L);
    ctx.c_down = std::log(p.eta_D) - ctx.d * p.eta_D + 0.5 * ctx.v * p.eta_D * p.eta_D +
                 log_L + std::log(p.p_D());
    ctx.c_up = std::log(p.eta_U) + ctx.d * p.eta_U + 0.5 * ctx.v * p.eta_U * p.eta_U +
               log_L + std::log(p.p_U);
    ctx.shift_down = ctx.d - ctx.v * p.eta_D;
    ctx.shift_up = ctx.d + ctx.v * p.eta_U;
    ctx.eta_D = p.eta_D;
    ctx.eta_U = p.eta_U;
    return ctx;
}

XiPosterior xi_posterior_ctx(double x, const XiContext& ctx) {
    const double z0 = (x - ctx.d) * ctx.inv_sd;
    const double t_zero = ctx.log_diff_norm - 0.5 * z0 * z0;
    double t_down =
        ctx.c_down + ctx.eta_D * x + std_normal_log_cdf(-(x - ctx.shift_down) * ctx.inv_sd);
    double t_up =
        ctx.c_up - ctx.eta_U * x + std_normal_log_cdf((x - ctx.shift_up) * ctx.inv_sd);
    // x so extreme that the tilt overflows while the log-CDF underflows
    // yields inf - inf; the jump weight there is zero.
    if (std::isnan(t_down)) t_down = -std::numeric_limits<double>::infinity();
    if (std::isnan(t_up)) t_up = -std::numeric_limits<double>::infinity();

    double m = t_zero;
    if (t_down > m) m = t_down;
    if (t_up > m) m = t_up;
    const double e_minus = std::exp(t_down - m);
    const double e_zero = std::exp(t_zero - m);
    const double e_plus = std::exp(t_up - m);
    const double total = e_minus + e_zero + e_plus;
    return {e_minus / total, e_zero / total, e_plus / total};
}

XiJDraw draw_xi_J_ctx(double x, const XiContext& ctx, RngStream& rng) {
    const XiPosterior post = xi_posterior_ctx(x, ctx);
    const double u = rng.uniform01();
    if (u < post.p_minus) {
        const double mean = x - ctx.d + ctx.v * ctx.eta_D;
        return {-1, truncated_normal_sample(mean, ctx.v, TruncationSide::negative, rng)};
    }
    if (u < post.p_minus + post.p_zero) {
        return {0, 0.0};
    }
    const double mean = x - ctx.d - ctx.v * ctx.eta_U;
    return {1, truncated_normal_sample(mean, ctx.v, TruncationSide::positive, rng)};
}

double draw_L(double current_L, const SufficientStats& stats, double nu_L,
              LSampler sampler, RngStream& rng, AcceptanceStats* acc) {
    const std::int64_t N = stats.jump_count();
    const std::int64_t n = stats.n;
    if (sampler != LSampler::metropolis_hastings) {
        // A tight attempt budget keeps a sweep from stalling when N is close
        // to n and the proposal rarely lands where exp(-L/2) is not tiny.
        std::uint64_t attempts = 0;
        const auto exact = draw_L_ar(N, n, nu_L, rng, &attempts, 1024);
        if (acc) acc->l_ar_attempts += attempts;
        if (exact) {
            if (acc) ++acc->l_ar_draws;
            return *exact;
        }
        if (acc) ++acc->l_ar_fallbacks;
    }
    const LMhDraw mh = draw_L_mh(current_L, N, n, nu_L, rng);
    if (acc) {
        ++acc->l_mh_proposed;
        if (mh.accepted) ++acc->l_mh_accepted;
    }
    return mh.L;
}

}  // namespace

LSampler l_sampler_from_name(std::string_view name) {
    if (name == "mh" || name == "metropolis_hastings") return LSampler::metropolis_hastings;
    if (name == "ar" || name == "acceptance_rejection") return LSampler::acceptance_rejection;
    if (name == "auto") return LSampler::auto_select;
    throw ConfigError("unknown L sampler: " + std::string(name) +
                      " (expected mh, ar or auto)");
}

std::string to_string(LSampler s) {
    switch (s) {
        case LSampler::metropolis_hastings: return "mh";
        case LSampler::acceptance_rejection: return "ar";
        case LSampler::auto_select: return "auto";
    }
    throw std::invalid_argument("bad L sampler");
}

void ChainConfig::validate() const {
    if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
    if (draws < 1) throw ConfigError("draws must be >= 1");
    if (thin < 1) throw ConfigError("thin must be >= 1");
    if (init) init->validate();
}

MuHConditional mu_h_conditional(const SufficientStats& stats, const PriorSpec& spec,
                                double delta) {
    require(std::isfinite(delta) && delta > 0.0, "mu_h conditional: delta must be > 0");
    const double n = static_cast<double>(stats.n);
    const double n_delta = n * delta;
    const double resid_drift = stats.xbar - stats.jbar;  // (xbar - Jbar)
    const double dev = spec.mu0 - resid_drift / delta;

    MuHConditional c;
    c.h_shape = 0.5 * n + spec.nu_h;
    c.h_rate = 0.5 * n * stats.s / delta + spec.A_h +
               0.5 * spec.A_mu * n_delta * dev * dev / (spec.A_mu + n_delta);
    c.mu_mean = (spec.mu0 * spec.A_mu + resid_drift * n) / (spec.A_mu + n_delta);
    c.mu_precision_factor = spec.A_mu + n_delta;
    return c;
}

MuHDraw draw_mu_h(const SufficientStats& stats, const PriorSpec& spec, double delta,
                  RngStream& rng) {
    const MuHConditional c = mu_h_conditional(stats, spec, delta);
    const double h = gamma_sample(c.h_shape, c.h_rate, rng);
    const double mu_prime = normal_sample(c.mu_mean, 1.0 / (h * c.mu_precision_factor), rng);
    return {mu_prime, h};
}

double l_mh_log_acceptance(double proposed, double current, std::int64_t n) {
    const double log_ratio = static_cast<double>(n) *
                             ((proposed - current) - std::log1p(proposed) +
                              std::log1p(current));
    return log_ratio < 0.0 ? log_ratio : 0.0;
}

LMhDraw draw_L_mh(double current_L, std::int64_t N, std::int64_t n, double nu_L,
                  RngStream& rng) {
    require(std::isfinite(current_L) && current_L > 0.0, "L MH: current L must be > 0");
    require(N >= 0 && n >= N, "L MH: need 0 <= N <= n");
    require(std::isfinite(nu_L) && nu_L > 0.0, "L MH: nu_L must be > 0");
    // (2n+1) L' ~ chi-square(2N + nu_L), i.e. L' ~ Gamma(N + nu_L/2, (2n+1)/2).
    const double chi = gamma_sample(static_cast<double>(N) + 0.5 * nu_L, 0.5, rng);
    const double proposed = chi / (2.0 * static_cast<double>(n) + 1.0);
    const double log_alpha = l_mh_log_acceptance(proposed, current_L, n);
    if (log_alpha >= 0.0 || std::log(rng.uniform01()) < log_alpha) {
        return {proposed, true};
    }
    return {current_L, false};
}

bool l_ar_precondition(std::int64_t N, std::int64_t n, double nu_L) {
    require(N >= 0 && n >= N, "L AR: need 0 <= N <= n");
    require(std::isfinite(nu_L) && nu_L > 0.0, "L AR: nu_L must be > 0");
    return static_cast<double>(n - N) - 0.5 * nu_L > 0.0;
}

std::optional<double> draw_L_ar(std::int64_t N, std::int64_t n, double nu_L,
                                RngStream& rng, std::uint64_t* attempts,
                                std::uint64_t max_attempts) {
    if (!l_ar_precondition(N, n, nu_L)) return std::nullopt;
    const double alpha = static_cast<double>(n - N) - 0.5 * nu_L;
    const GammaGammaParams proposal{alpha, 1.0, static_cast<double>(N) + 0.5 * nu_L};
    for (std::uint64_t k = 0; k < max_attempts; ++k) {
        const double L = gamma_gamma_sample(proposal, rng);
        if (attempts) ++*attempts;
        if (std::log(rng.uniform01()) < -0.5 * L) return L;
    }
    return std::nullopt;
}

BetaParams p_U_conditional(const SufficientStats& stats, const PriorSpec& spec) {
    return {static_cast<double>(stats.n_plus1) + spec.a_U,
            static_cast<double>(stats.n_minus1) + spec.b_U};
}

double draw_p_U(const SufficientStats& stats, const PriorSpec& spec, RngStream& rng) {
    const BetaParams c = p_U_conditional(stats, spec);
    return beta_sample(c.a, c.b, rng);
}

EtaConditional eta_conditional(const SufficientStats& stats, const PriorSpec& spec) {
    EtaConditional c;
    c.shape_D = static_cast<double>(stats.n_minus1) + spec.nu_etaD;
    c.rate_D = spec.A_etaD - stats.N_DJ;
    c.shape_U = static_cast<double>(stats.n_plus1) + spec.nu_etaU;
    c.rate_U = spec.A_etaU + stats.N_UJ;
    return c;
}

EtaDraw draw_etas(const SufficientStats& stats, const PriorSpec& spec, RngStream& rng) {
    const EtaConditional c = eta_conditional(stats, spec);
    const double eta_D = gamma_sample(c.shape_D, c.rate_D, rng);
    const double eta_U = gamma_sample(c.shape_U, c.rate_U, rng);
    return {eta_D, eta_U};
}

XiPosterior xi_posterior(double x_i, const ModelParams& params, double delta) {
    params.validate();
    require(std::isfinite(delta) && delta > 0.0, "xi posterior: delta must be > 0");
    return xi_posterior_ctx(x_i, make_xi_context(params, delta));
}

XiJDraw draw_xi_J(double x_i, const ModelParams& params, double delta, RngStream& rng) {
    params.validate();
    require(std::isfinite(delta) && delta > 0.0, "xi draw: delta must be > 0");
    return draw_xi_J_ctx(x_i, make_xi_context(params, delta), rng);
}

GibbsState sweep(const ReturnsSeries& x, GibbsState state, const PriorSpec& spec,
                 const ChainConfig& cfg, RngStream& rng, AcceptanceStats* stats) {
    const Eigen::Index n = x.n();
    require(state.latents.xi.size() == n && state.latents.J.size() == n,
            "sweep: latent length mismatch");

    const XiContext ctx = make_xi_context(state.params, x.delta);
    for (Eigen::Index i = 0; i < n; ++i) {
        const XiJDraw d = draw_xi_J_ctx(x.values[i], ctx, rng);
        state.latents.xi[i] = d.xi;
        state.latents.J[i] = d.J;
    }

    const SufficientStats st = sufficient_stats(x, state.latents);
    const MuHDraw mh = draw_mu_h(st, spec, x.delta, rng);
    state.params.mu_prime = mh.mu_prime;
    state.params.h = mh.h;
    state.params.L = draw_L(state.params.L, st, spec.nu_L, cfg.l_sampler, rng, stats);
    state.params.p_U = draw_p_U(st, spec, rng);
    const EtaDraw etas = draw_etas(st, spec, rng);
    state.params.eta_D = etas.eta_D;
    state.params.eta_U = etas.eta_U;
    return state;
}

Chain run_chain(const ReturnsSeries& x, const PriorSpec& spec, const ChainConfig& cfg) {
    cfg.validate();
    spec.validate();
    x.validate();
    if (x.n() < 2) throw std::invalid_argument("run_chain: need at least 2 observations");

    RngStream rng(cfg.seed);

    GibbsState state;
    state.params = cfg.init ? *cfg.init : prior_sample(spec, rng);
    state.params.validate();

    const Eigen::Index n = x.n();
    state.latents.xi.resize(n);
    state.latents.J.resize(n);
    {
        const XiContext ctx = make_xi_context(state.params, x.delta);
        for (Eigen::Index i = 0; i < n; ++i) {
            const XiJDraw d = draw_xi_J_ctx(x.values[i], ctx, rng);
            state.latents.xi[i] = d.xi;
            state.latents.J[i] = d.J;
        }
    }

    Chain chain;
    chain.config = cfg;
    chain.delta = x.delta;
    chain.xi_minus_counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(n);
    chain.xi_plus_counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(n);
    chain.samples.reserve(static_cast<std::size_t>(cfg.draws / cfg.thin));

    for (std::int64_t s = 0; s < cfg.burn_in; ++s) {
        state = sweep(x, std::move(state), spec, cfg, rng, &chain.acceptance);
    }
    for (std::int64_t s = 1; s <= cfg.draws; ++s) {
        state = sweep(x, std::move(state), spec, cfg, rng, &chain.acceptance);
        if (s % cfg.thin != 0) continue;

        std::int64_t n_minus = 0;
        std::int64_t n_plus = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (state.latents.xi[i] == -1) {
                ++n_minus;
                ++chain.xi_minus_counts[i];
            } else if (state.latents.xi[i] == 1) {
                ++n_plus;
                ++chain.xi_plus_counts[i];
            }
        }
        chain.samples.push_back(Draw{s, state.params, n_minus, n_plus});
        if (cfg.store_full_latents) chain.latent_draws.push_back(state.latents);
    }
    return chain;
}

}  // namespace dejd
