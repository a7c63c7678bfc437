#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dejd/model.hpp"
#include "dejd/rng.hpp"

namespace dejd {

/// Hyperparameters of the conjugate prior block:
///   h ~ Gamma(nu_h, A_h)            (rate convention)
///   mu' | h ~ N(mu0, 1/(h A_mu))
///   L ~ ChiSquare(nu_L)
///   p_U ~ Beta(a_U, b_U)
///   eta_U ~ Gamma(nu_etaU, A_etaU), eta_D ~ Gamma(nu_etaD, A_etaD)
struct PriorSpec {
    double mu0 = 0.0;
    double A_mu = 1.0;
    double nu_h = 5.0;
    double A_h = 1.0;
    double a_U = 1.0;
    double b_U = 1.0;
    double nu_etaU = 2.56;
    double A_etaU = 0.00576;
    double nu_etaD = 2.56;
    double A_etaD = 0.00576;
    double nu_L = 10.0 * kTradingDayDelta;

    void validate() const;
};

enum class PriorPreset { I, II, III, IV };

PriorPreset prior_preset_from_name(std::string_view name);
std::string to_string(PriorPreset p);

/// One of the four named hyperparameter presets. nu_L scales with the time
/// step (10 * delta).
PriorSpec preset(PriorPreset which, double delta = kTradingDayDelta);

/// Non-fatal oddities worth surfacing to the user (e.g. a near-degenerate
/// chi-square prior on L).
std::vector<std::string> validation_warnings(const PriorSpec& spec);

ModelParams prior_sample(const PriorSpec& spec, RngStream& rng);

/// Sum of the six log prior densities of the theta block, with exact
/// normalizers; -inf outside the support.
double prior_log_pdf(const PriorSpec& spec, const ModelParams& params);

}  // namespace dejd
