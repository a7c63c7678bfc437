#include "dejd/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace dejd {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double sample_sd(const Eigen::VectorXd& v) {
    const Eigen::Index t = v.size();
    if (t < 2) return 0.0;
    if (v.maxCoeff() == v.minCoeff()) return 0.0;
    const double mean = v.mean();
    const double ss = (v.array() - mean).square().sum();
    return std::sqrt(ss / static_cast<double>(t - 1));
}

double extract(const Draw& d, std::string_view name, double delta) {
    if (name == "mu_prime") return d.params.mu_prime;
    if (name == "h") return d.params.h;
    if (name == "L") return d.params.L;
    if (name == "p_U") return d.params.p_U;
    if (name == "eta_D") return d.params.eta_D;
    if (name == "eta_U") return d.params.eta_U;
    if (name == "mu") return d.params.mu();
    if (name == "sigma") return d.params.sigma();
    if (name == "lambda") return d.params.lambda(delta);
    throw std::out_of_range("unknown parameter name: " + std::string(name));
}

}  // namespace

const SummaryRow& PosteriorSummary::row(std::string_view name) const {
    for (const auto& r : rows) {
        if (r.name == name) return r;
    }
    throw std::out_of_range("no summary row named " + std::string(name));
}

PosteriorSummary summarize(const Chain& chain, double delta) {
    require(!chain.samples.empty(), "summarize: empty chain");
    require(std::isfinite(delta) && delta > 0.0, "summarize: delta must be > 0");

    const Eigen::Index m = static_cast<Eigen::Index>(chain.samples.size());
    // Table rows in reporting order; nonlinear functionals are computed per
    // draw and then averaged, never applied to the averaged parameters.
    const std::vector<std::string> names = {
        "mu_prime", "mu",    "sigma", "lambda",    "inv_one_plus_lambda_delta",
        "p_U",      "eta_D", "eta_U", "inv_eta_D", "inv_eta_U"};

    PosteriorSummary out;
    out.draw_count = chain.retained();
    out.seed = chain.config.seed;
    out.burn_in = chain.config.burn_in;
    out.thin = chain.config.thin;
    out.delta = delta;

    Eigen::VectorXd col(m);
    for (const auto& name : names) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const Draw& d = chain.samples[static_cast<std::size_t>(i)];
            if (name == "inv_one_plus_lambda_delta") {
                col[i] = 1.0 / (1.0 + d.params.L);
            } else if (name == "inv_eta_D") {
                col[i] = 1.0 / d.params.eta_D;
            } else if (name == "inv_eta_U") {
                col[i] = 1.0 / d.params.eta_U;
            } else {
                col[i] = extract(d, name, delta);
            }
        }
        out.rows.push_back(SummaryRow{name, col.mean(), sample_sd(col)});
    }
    return out;
}

const std::vector<std::string>& diagnostic_parameter_names() {
    static const std::vector<std::string> names = {
        "mu_prime", "h", "L", "p_U", "eta_D", "eta_U", "mu", "sigma", "lambda"};
    return names;
}

Eigen::VectorXd param_series(const Chain& chain, std::string_view name) {
    const Eigen::Index m = static_cast<Eigen::Index>(chain.samples.size());
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        v[i] = extract(chain.samples[static_cast<std::size_t>(i)], name, chain.delta);
    }
    return v;
}

ErgodicPaths ergodic_paths(const Chain& chain, std::string_view name) {
    require(!chain.samples.empty(), "ergodic paths: empty chain");
    const Eigen::VectorXd v = param_series(chain, name);
    const Eigen::Index t_max = v.size();

    ErgodicPaths paths;
    paths.running_mean.resize(t_max);
    paths.running_std.resize(t_max);

    // Welford recurrence; exact for constant chains.
    double mean = 0.0;
    double m2 = 0.0;
    for (Eigen::Index t = 0; t < t_max; ++t) {
        const double d = v[t] - mean;
        mean += d / static_cast<double>(t + 1);
        m2 += d * (v[t] - mean);
        paths.running_mean[t] = mean;
        paths.running_std[t] = t >= 1 ? std::sqrt(m2 / static_cast<double>(t)) : 0.0;
    }
    return paths;
}

Eigen::VectorXd cusum_path(const Chain& chain, std::string_view name) {
    require(chain.samples.size() >= 2, "cusum path: need at least 2 draws");
    const Eigen::VectorXd v = param_series(chain, name);
    const double mean = v.mean();

    Eigen::VectorXd path(v.size());
    double sum = 0.0;
    double comp = 0.0;
    for (Eigen::Index t = 0; t < v.size(); ++t) {
        const double term = v[t] - mean;
        const double next = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - next) + term;
        } else {
            comp += (term - next) + sum;
        }
        sum = next;
        path[t] = sum + comp;
    }
    return path;
}

int sign_crossings(const Eigen::VectorXd& path) {
    int crossings = 0;
    int last_sign = 0;
    for (Eigen::Index t = 0; t < path.size(); ++t) {
        const int s = path[t] > 0.0 ? 1 : (path[t] < 0.0 ? -1 : 0);
        if (s != 0) {
            if (last_sign != 0 && s != last_sign) ++crossings;
            last_sign = s;
        }
    }
    return crossings;
}

JumpProbabilities jump_probabilities(const Chain& chain) {
    require(chain.has_latent_accumulators(),
            "jump probabilities: chain carries no latent accumulators");
    require(chain.retained() > 0, "jump probabilities: empty chain");
    const double m = static_cast<double>(chain.retained());
    JumpProbabilities probs;
    probs.p_minus = chain.xi_minus_counts.cast<double>() / m;
    probs.p_plus = chain.xi_plus_counts.cast<double>() / m;
    return probs;
}

JumpReport detect_jumps(const JumpProbabilities& probs, const ReturnsSeries& x,
                        double tau) {
    require(probs.p_minus.size() == x.n() && probs.p_plus.size() == x.n(),
            "detect jumps: probability/series length mismatch");
    require(std::isfinite(tau) && tau > 0.0 && tau < 1.0,
            "detect jumps: tau must be in (0,1)");

    JumpReport report;
    report.p_minus = probs.p_minus;
    report.p_plus = probs.p_plus;
    report.tau = tau;
    report.xbar_n = x.values.mean();
    report.sigma_n = sample_sd(x.values);

    for (Eigen::Index i = 0; i < x.n(); ++i) {
        if (probs.p_minus[i] > tau) report.down_days.push_back(i);
        if (probs.p_plus[i] > tau) report.up_days.push_back(i);
    }

    // Smallest detected return in absolute value; ties go to the earlier day.
    for (const Eigen::Index i : report.down_days) {
        if (!report.J_D || std::abs(x.values[i]) < std::abs(*report.J_D)) {
            report.J_D = x.values[i];
        }
    }
    for (const Eigen::Index i : report.up_days) {
        if (!report.J_U || std::abs(x.values[i]) < std::abs(*report.J_U)) {
            report.J_U = x.values[i];
        }
    }
    if (report.J_D) report.k_D = (report.xbar_n - *report.J_D) / report.sigma_n;
    if (report.J_U) report.k_U = (*report.J_U - report.xbar_n) / report.sigma_n;
    return report;
}

}  // namespace dejd
