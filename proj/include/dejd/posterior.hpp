#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dejd/gibbs.hpp"

namespace dejd {

struct SummaryRow {
    std::string name;
    double mean;
    double sd;
};

/// Posterior means and standard deviations for the model parameters in both
/// parametrizations plus the derived functionals 1/eta_D, 1/eta_U and
/// 1/(1 + lambda delta), each averaged per draw.
struct PosteriorSummary {
    std::vector<SummaryRow> rows;
    std::int64_t draw_count = 0;
    std::uint64_t seed = 0;
    std::int64_t burn_in = 0;
    std::int64_t thin = 1;
    double delta = kTradingDayDelta;

    const SummaryRow& row(std::string_view name) const;
};

PosteriorSummary summarize(const Chain& chain, double delta);

/// Names accepted by the per-parameter diagnostics: the six sampled
/// parameters plus mu, sigma and lambda.
const std::vector<std::string>& diagnostic_parameter_names();

Eigen::VectorXd param_series(const Chain& chain, std::string_view name);

struct ErgodicPaths {
    Eigen::VectorXd running_mean;
    Eigen::VectorXd running_std;  // sample sd of draws 1..t; 0 at t = 1
};

ErgodicPaths ergodic_paths(const Chain& chain, std::string_view name);

/// Centered cumulative sums of the draw sequence; ends exactly at 0.
Eigen::VectorXd cusum_path(const Chain& chain, std::string_view name);

/// Advisory smoothness heuristic for a CUSUM path.
int sign_crossings(const Eigen::VectorXd& path);

struct JumpProbabilities {
    Eigen::VectorXd p_minus;
    Eigen::VectorXd p_plus;
};

JumpProbabilities jump_probabilities(const Chain& chain);

struct JumpReport {
    Eigen::VectorXd p_minus;
    Eigen::VectorXd p_plus;
    std::vector<Eigen::Index> down_days;  // {i : p_minus[i] > tau}
    std::vector<Eigen::Index> up_days;    // {i : p_plus[i] > tau}
    std::optional<double> J_D;  // smallest-|x| detected down-jump return
    std::optional<double> J_U;  // smallest-|x| detected up-jump return
    std::optional<double> k_D;  // (xbar_n - J_D) / sigma_n
    std::optional<double> k_U;  // (J_U - xbar_n) / sigma_n
    double tau = 0.5;
    double xbar_n = 0.0;
    double sigma_n = 0.0;
};

JumpReport detect_jumps(const JumpProbabilities& probs, const ReturnsSeries& x,
                        double tau = 0.5);

}  // namespace dejd
