#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dejd/distributions.hpp"
#include "dejd/errors.hpp"
#include "dejd/gibbs.hpp"
#include "dejd/model.hpp"
#include "dejd/prior.hpp"
#include "support/geweke.hpp"
#include "support/oracles.hpp"

using dejd::ChainConfig;
using dejd::kTradingDayDelta;
using dejd::ModelParams;
using dejd::PriorPreset;
using dejd::PriorSpec;
using dejd::ReturnsSeries;
using dejd::RngStream;

namespace {

const double kDelta = kTradingDayDelta;

ModelParams table2_truth() {
    return ModelParams::from_moments(0.25, 0.4, 30.0, 0.5, 30.0, 5.0, kDelta);
}

// Unnormalized full-conditional density of L given N jumps among n days.
double l_target(double L, std::int64_t N, std::int64_t n, double nu_L) {
    if (L <= 0.0) return 0.0;
    const double log_t = (static_cast<double>(N) + 0.5 * nu_L - 1.0) * std::log(L) -
                         0.5 * L - static_cast<double>(n) * std::log1p(L);
    return std::exp(log_t);
}

std::vector<double> mh_chain(std::int64_t N, std::int64_t n, double nu_L, int kept,
                             int burn, RngStream& rng) {
    double L = 0.01;
    for (int i = 0; i < burn; ++i) L = dejd::draw_L_mh(L, N, n, nu_L, rng).L;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(kept));
    for (int i = 0; i < kept; ++i) {
        L = dejd::draw_L_mh(L, N, n, nu_L, rng).L;
        out.push_back(L);
    }
    return out;
}

std::vector<double> ar_draws(std::int64_t N, std::int64_t n, double nu_L, int kept,
                             RngStream& rng) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(kept));
    for (int i = 0; i < kept; ++i) {
        const auto d = dejd::draw_L_ar(N, n, nu_L, rng);
        REQUIRE(d.has_value());
        out.push_back(*d);
    }
    return out;
}

}  // namespace

TEST_CASE("draw_mu_h: fixed point, conditional moments at a small instance") {
    const PriorSpec spec = dejd::preset(PriorPreset::I, kDelta);

    // When the data drift equals the prior location, the posterior mean is
    // exactly the shared value.
    dejd::SufficientStats agree{};
    agree.n = 200;
    agree.xbar = spec.mu0 * kDelta;
    agree.jbar = 0.0;
    agree.s = 1e-4;
    const dejd::MuHConditional cond = dejd::mu_h_conditional(agree, spec, kDelta);
    CHECK(cond.mu_mean == doctest::Approx(spec.mu0).epsilon(1e-14));

    // Conditional draws at a fixed small instance vs the closed-form
    // gamma-normal moments.
    RngStream data_rng(4001);
    const dejd::SimulatedPath path = dejd::simulate(table2_truth(), 50, kDelta, data_rng);
    const dejd::SufficientStats st = dejd::sufficient_stats(path.returns, path.latents);
    const dejd::MuHConditional c = dejd::mu_h_conditional(st, spec, kDelta);

    RngStream rng(4002);
    std::vector<double> hs, mus;
    for (int i = 0; i < 100000; ++i) {
        const dejd::MuHDraw d = dejd::draw_mu_h(st, spec, kDelta, rng);
        hs.push_back(d.h);
        mus.push_back(d.mu_prime);
    }
    const double h_mean = c.h_shape / c.h_rate;
    const double h_var = c.h_shape / (c.h_rate * c.h_rate);
    CHECK(std::abs(oracle::mean(hs) - h_mean) < 3.0 * oracle::standard_error(hs));
    CHECK(oracle::variance(hs) == doctest::Approx(h_var).epsilon(0.05));

    CHECK(std::abs(oracle::mean(mus) - c.mu_mean) < 3.0 * oracle::standard_error(mus));
    // Var(mu') = E[1/h] / precision_factor = rate/((shape-1) factor).
    const double mu_var = c.h_rate / ((c.h_shape - 1.0) * c.mu_precision_factor);
    CHECK(oracle::variance(mus) == doctest::Approx(mu_var).epsilon(0.05));
}

TEST_CASE("L Metropolis-Hastings: identity acceptance, target distribution") {
    // Proposing the current state is always accepted.
    for (double L : {1e-6, 0.01, 0.5, 3.0}) {
        CHECK(dejd::l_mh_log_acceptance(L, L, 1000) == 0.0);
    }

    const double nu_L = 10.0 / 252.0;
    RngStream rng(4003);

    // Empirical distribution vs the quadrature-normalized target.
    auto draws = mh_chain(12, 1000, nu_L, 200000, 2000, rng);
    auto target = [&](double L) { return l_target(L, 12, 1000, nu_L); };
    CHECK(oracle::tv_distance(draws, target, 0.0, 0.04, 80) < 0.02);

    // The proposal is not the target: some proposals must be rejected.
    RngStream rng2(4004);
    int accepted = 0;
    double L = 0.01;
    for (int i = 0; i < 20000; ++i) {
        const dejd::LMhDraw d = dejd::draw_L_mh(L, 12, 1000, nu_L, rng2);
        L = d.L;
        accepted += d.accepted ? 1 : 0;
    }
    CHECK(accepted > 0);
    CHECK(accepted < 20000);

    CHECK_THROWS_AS(dejd::draw_L_mh(-1.0, 0, 10, nu_L, rng2), std::invalid_argument);
}

TEST_CASE("L acceptance-rejection: precondition boundary and support") {
    const double nu_L = 10.0 / 252.0;
    RngStream rng(4005);

    // n - N - nu_L/2 = 0.98 > 0: the proposal still exists.
    CHECK(dejd::l_ar_precondition(999, 1000, nu_L));
    // n - N - nu_L/2 < 0: typed fallback signal.
    CHECK_FALSE(dejd::l_ar_precondition(1000, 1000, nu_L));
    CHECK_FALSE(dejd::draw_L_ar(1000, 1000, nu_L, rng).has_value());

    std::uint64_t attempts = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto d = dejd::draw_L_ar(12, 1000, nu_L, rng, &attempts);
        REQUIRE(d.has_value());
        REQUIRE(*d > 0.0);
    }
    CHECK(attempts >= 1000);
}

TEST_CASE("L samplers agree: two-sample KS between MH and AR") {
    const double nu_L = 10.0 / 252.0;
    const std::vector<std::pair<std::int64_t, std::int64_t>> conditioning = {
        {12, 1000}, {3, 250}};
    for (const auto& [N, n] : conditioning) {
        RngStream rng_mh(4006 + N);
        RngStream rng_ar(4007 + N);
        auto mh = mh_chain(N, n, nu_L, 100000, 2000, rng_mh);
        auto ar = ar_draws(N, n, nu_L, 100000, rng_ar);
        const double ks = oracle::ks_two_sample(mh, ar);
        CHECK(ks < oracle::ks_two_sample_critical(mh.size(), ar.size(), 1.628));
    }
}

TEST_CASE("draw_p_U: prior reduction, posterior moments, mirror symmetry") {
    PriorSpec spec = dejd::preset(PriorPreset::I, kDelta);
    RngStream rng(4008);

    dejd::SufficientStats none{};
    std::vector<double> uniform;
    for (int i = 0; i < 10000; ++i) uniform.push_back(dejd::draw_p_U(none, spec, rng));
    CHECK(oracle::ks_distance_to_cdf(uniform, [](double x) { return x; }) < 0.02);

    dejd::SufficientStats st{};
    st.n_plus1 = 3;
    st.n_minus1 = 2;
    const dejd::BetaParams cond = dejd::p_U_conditional(st, spec);
    CHECK(cond.a == 4.0);
    CHECK(cond.b == 3.0);
    std::vector<double> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(dejd::draw_p_U(st, spec, rng));
    CHECK(std::abs(oracle::mean(draws) - 4.0 / 7.0) < 3.0 * oracle::standard_error(draws));

    dejd::SufficientStats mirrored{};
    mirrored.n_plus1 = 2;
    mirrored.n_minus1 = 3;
    std::vector<double> mirror_draws;
    for (int i = 0; i < 100000; ++i) mirror_draws.push_back(dejd::draw_p_U(mirrored, spec, rng));
    for (double& v : mirror_draws) v = 1.0 - v;
    CHECK(std::abs(oracle::mean(mirror_draws) - oracle::mean(draws)) <
          3.0 * std::sqrt(oracle::variance(draws) / 1e5 + oracle::variance(mirror_draws) / 1e5));
}

TEST_CASE("draw_etas: prior reduction, worked example, rate positivity") {
    const PriorSpec spec = dejd::preset(PriorPreset::I, kDelta);

    dejd::SufficientStats one_down{};
    one_down.n = 1;
    one_down.n_minus1 = 1;
    one_down.N_DJ = -0.1;
    const dejd::EtaConditional c = dejd::eta_conditional(one_down, spec);
    CHECK(c.shape_D == doctest::Approx(1.0 + 2.56).epsilon(1e-15));
    CHECK(c.rate_D == doctest::Approx(0.00576 + 0.1).epsilon(1e-15));

    RngStream rng(4009);
    std::vector<double> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(dejd::draw_etas(one_down, spec, rng).eta_D);
    CHECK(std::abs(oracle::mean(draws) - 3.56 / 0.10576) < 3.0 * oracle::standard_error(draws));

    // Rates stay strictly positive for random latent states.
    RngStream sim_rng(4010);
    for (int k = 0; k < 50; ++k) {
        const dejd::SimulatedPath path = dejd::simulate(table2_truth(), 200, kDelta, sim_rng);
        const dejd::SufficientStats st = dejd::sufficient_stats(path.returns, path.latents);
        const dejd::EtaConditional ec = dejd::eta_conditional(st, spec);
        CHECK(ec.rate_D > 0.0);
        CHECK(ec.rate_U > 0.0);
    }
}

TEST_CASE("xi_posterior: normalization, degenerate weight, mirror symmetry") {
    RngStream rng(4011);
    const PriorSpec spec = dejd::preset(PriorPreset::III, kDelta);
    for (int k = 0; k < 10000; ++k) {
        const ModelParams p = dejd::prior_sample(spec, rng);
        const double x = 0.4 * (rng.uniform01() - 0.5);
        const dejd::XiPosterior post = dejd::xi_posterior(x, p, kDelta);
        REQUIRE(post.p_minus >= 0.0);
        REQUIRE(post.p_zero >= 0.0);
        REQUIRE(post.p_plus >= 0.0);
        REQUIRE(std::abs(post.p_minus + post.p_zero + post.p_plus - 1.0) < 1e-12);
    }

    // Vanishing jump weight: p_zero -> 1 as L -> 0. The window where the
    // 1 - 1e-12 bound holds shrinks with the Gaussian tail (at 10 sd the
    // diffusion density is ~2e-22, so L = 1e-15 still loses out there);
    // check a tight window at 1e-15 and the full one at 1e-40.
    ModelParams tiny = table2_truth();
    tiny.L = 1e-15;
    const double sd = std::sqrt(kDelta / tiny.h);
    for (int k = -3; k <= 3; ++k) {
        const double x = tiny.mu_prime * kDelta + k * sd;
        CHECK(dejd::xi_posterior(x, tiny, kDelta).p_zero >= 1.0 - 1e-12);
    }
    tiny.L = 1e-40;
    for (int k = -10; k <= 10; ++k) {
        const double x = tiny.mu_prime * kDelta + k * sd;
        CHECK(dejd::xi_posterior(x, tiny, kDelta).p_zero >= 1.0 - 1e-12);
    }

    ModelParams symmetric = table2_truth();
    symmetric.mu_prime = 0.0;
    symmetric.eta_U = 8.0;
    symmetric.eta_D = 8.0;
    const dejd::XiPosterior post0 = dejd::xi_posterior(0.0, symmetric, kDelta);
    CHECK(std::abs(post0.p_minus - post0.p_plus) < 1e-12);
}

TEST_CASE("xi_posterior agrees with the quadrature Bayes rule") {
    const ModelParams p = table2_truth();  // mu' = 0.17, sigma = 0.4, L = 30/252
    const double d = p.mu_prime * kDelta;
    const double sd = std::sqrt(kDelta / p.h);

    auto down_component = [&](double x) {
        auto f = [&](double z) {
            if (x - z >= 0.0) return 0.0;
            return oracle::normal_pdf((z - d) / sd) / sd * p.eta_D * std::exp(p.eta_D * (x - z));
        };
        return oracle::integrate_piecewise(f, {d - 14.0 * sd, x, d + 14.0 * sd, x + 14.0 * sd},
                                           1e-13);
    };
    auto up_component = [&](double x) {
        auto f = [&](double z) {
            if (x - z < 0.0) return 0.0;
            return oracle::normal_pdf((z - d) / sd) / sd * p.eta_U * std::exp(-p.eta_U * (x - z));
        };
        return oracle::integrate_piecewise(f, {d - 14.0 * sd, x - 14.0 * sd, x, d + 14.0 * sd},
                                           1e-13);
    };

    const double w_jump = p.L / (1.0 + p.L);
    const double w_minus = w_jump * p.p_D();
    const double w_zero = 1.0 / (1.0 + p.L);
    const double w_plus = w_jump * p.p_U;

    for (double x : {-0.15, 0.0, 0.15}) {
        const double t_minus = w_minus * down_component(x);
        const double t_zero = w_zero * oracle::normal_pdf((x - d) / sd) / sd;
        const double t_plus = w_plus * up_component(x);
        const double total = t_minus + t_zero + t_plus;

        const dejd::XiPosterior post = dejd::xi_posterior(x, p, kDelta);
        CHECK(std::abs(post.p_minus - t_minus / total) < 1e-6);
        CHECK(std::abs(post.p_zero - t_zero / total) < 1e-6);
        CHECK(std::abs(post.p_plus - t_plus / total) < 1e-6);
    }
}

TEST_CASE("draw_xi_J: exact zero, sign consistency, truncated conditional mean") {
    const ModelParams p = table2_truth();
    RngStream rng(4012);

    int zeros = 0;
    for (int k = 0; k < 100000; ++k) {
        const double x = 0.3 * (rng.uniform01() - 0.5);
        const dejd::XiJDraw d = dejd::draw_xi_J(x, p, kDelta, rng);
        if (d.xi == 0) {
            REQUIRE(d.J == 0.0);
            ++zeros;
        } else if (d.xi == -1) {
            REQUIRE(d.J < 0.0);
        } else {
            REQUIRE(d.J > 0.0);
        }
    }
    CHECK(zeros > 0);

    // J | xi = -1 is the one-sided truncated normal of the down-jump kernel;
    // its mean is checked against quadrature of that kernel.
    const double x_obs = 0.0;
    const double v = kDelta / p.h;
    const double mean = x_obs - p.mu_prime * kDelta + v * p.eta_D;
    const double sdj = std::sqrt(v);
    auto w = [&](double j) { return std::exp(-0.5 * (j - mean) * (j - mean) / v); };
    const double mass = oracle::integrate(w, mean - 14.0 * sdj, 0.0, 1e-15);
    const double moment =
        oracle::integrate([&](double j) { return j * w(j); }, mean - 14.0 * sdj, 0.0, 1e-15);
    const double truncated_mean = moment / mass;

    std::vector<double> draws;
    RngStream rng2(4013);
    for (int k = 0; k < 100000; ++k) {
        draws.push_back(
            dejd::truncated_normal_sample(mean, v, dejd::TruncationSide::negative, rng2));
    }
    CHECK(std::abs(oracle::mean(draws) - truncated_mean) < 3.0 * oracle::standard_error(draws));
}

TEST_CASE("sweep: determinism and invariant preservation") {
    const PriorSpec spec = dejd::preset(PriorPreset::I, kDelta);
    ChainConfig cfg;
    cfg.l_sampler = dejd::LSampler::auto_select;

    RngStream gen(4014);
    dejd::GibbsState state;
    state.params = dejd::prior_sample(spec, gen);
    const dejd::SimulatedPath path = dejd::simulate(state.params, 300, kDelta, gen);
    state.latents = path.latents;

    dejd::GibbsState a = state;
    dejd::GibbsState b = state;
    RngStream ra(777);
    RngStream rb(777);
    a = dejd::sweep(path.returns, std::move(a), spec, cfg, ra);
    b = dejd::sweep(path.returns, std::move(b), spec, cfg, rb);
    CHECK(a.params.mu_prime == b.params.mu_prime);
    CHECK(a.params.h == b.params.h);
    CHECK(a.params.L == b.params.L);
    CHECK(a.params.p_U == b.params.p_U);
    CHECK(a.params.eta_D == b.params.eta_D);
    CHECK(a.params.eta_U == b.params.eta_U);
    CHECK(a.latents.xi == b.latents.xi);
    CHECK(a.latents.J == b.latents.J);

    a.params.validate();
    a.latents.validate();
}

TEST_CASE("run_chain: thinning arithmetic, reproducibility, accumulators") {
    RngStream gen(4015);
    const dejd::SimulatedPath path = dejd::simulate(table2_truth(), 120, kDelta, gen);
    const PriorSpec spec = dejd::preset(PriorPreset::I, kDelta);

    ChainConfig cfg;
    cfg.burn_in = 20;
    cfg.draws = 10;
    cfg.thin = 2;
    cfg.seed = 99;
    const dejd::Chain chain = dejd::run_chain(path.returns, spec, cfg);
    CHECK(chain.retained() == 5);
    CHECK(chain.samples.front().sweep_index == 2);
    CHECK(chain.samples.back().sweep_index == 10);
    CHECK(chain.has_latent_accumulators());
    CHECK(chain.xi_minus_counts.size() == 120);
    for (Eigen::Index i = 0; i < 120; ++i) {
        CHECK(chain.xi_minus_counts[i] >= 0);
        CHECK(chain.xi_minus_counts[i] <= chain.retained());
    }

    const dejd::Chain again = dejd::run_chain(path.returns, spec, cfg);
    REQUIRE(again.retained() == chain.retained());
    for (std::size_t i = 0; i < chain.samples.size(); ++i) {
        CHECK(chain.samples[i].params.mu_prime == again.samples[i].params.mu_prime);
        CHECK(chain.samples[i].params.h == again.samples[i].params.h);
        CHECK(chain.samples[i].params.L == again.samples[i].params.L);
        CHECK(chain.samples[i].params.p_U == again.samples[i].params.p_U);
        CHECK(chain.samples[i].params.eta_D == again.samples[i].params.eta_D);
        CHECK(chain.samples[i].params.eta_U == again.samples[i].params.eta_U);
        CHECK(chain.samples[i].n_minus1 == again.samples[i].n_minus1);
        CHECK(chain.samples[i].n_plus1 == again.samples[i].n_plus1);
    }

    ChainConfig bad = cfg;
    bad.draws = 0;
    CHECK_THROWS_AS(dejd::run_chain(path.returns, spec, bad), dejd::ConfigError);
    bad = cfg;
    bad.thin = 0;
    CHECK_THROWS_AS(dejd::run_chain(path.returns, spec, bad), dejd::ConfigError);
}

TEST_CASE("joint-distribution coherence (Geweke-style, reduced size)") {
    const PriorSpec spec = dejd::preset(PriorPreset::III, kDelta);
    const geweke::Result result = geweke::run(20, 15000, spec, 4016);
    for (std::size_t k = 0; k < geweke::kTestFunctions.size(); ++k) {
        INFO(geweke::kTestFunctions[k], ": z = ", result.z[k]);
        CHECK(std::abs(result.z[k]) < 5.0);
    }
}
