#include "dejd/prior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dejd/distributions.hpp"
#include "dejd/errors.hpp"

namespace dejd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double gamma_log_pdf(double x, double shape, double rate) {
    if (!(x > 0.0)) return kNegInf;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
           rate * x;
}

double chi_square_log_pdf(double x, double nu) {
    if (!(x > 0.0)) return kNegInf;
    return -std::lgamma(0.5 * nu) - 0.5 * nu * std::numbers::ln2 +
           (0.5 * nu - 1.0) * std::log(x) - 0.5 * x;
}

double beta_log_pdf(double x, double a, double b) {
    if (!(x > 0.0 && x < 1.0)) return kNegInf;
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
           (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
}

}  // namespace

void PriorSpec::validate() const {
    require(std::isfinite(mu0), "prior: mu0 must be finite");
    require(std::isfinite(A_mu) && A_mu > 0.0, "prior: A_mu must be > 0");
    require(std::isfinite(nu_h) && nu_h > 0.0, "prior: nu_h must be > 0");
    require(std::isfinite(A_h) && A_h > 0.0, "prior: A_h must be > 0");
    require(std::isfinite(a_U) && a_U > 0.0, "prior: a_U must be > 0");
    require(std::isfinite(b_U) && b_U > 0.0, "prior: b_U must be > 0");
    require(std::isfinite(nu_etaU) && nu_etaU > 0.0, "prior: nu_etaU must be > 0");
    require(std::isfinite(A_etaU) && A_etaU > 0.0, "prior: A_etaU must be > 0");
    require(std::isfinite(nu_etaD) && nu_etaD > 0.0, "prior: nu_etaD must be > 0");
    require(std::isfinite(A_etaD) && A_etaD > 0.0, "prior: A_etaD must be > 0");
    require(std::isfinite(nu_L) && nu_L > 0.0, "prior: nu_L must be > 0");
}

PriorPreset prior_preset_from_name(std::string_view name) {
    if (name == "I") return PriorPreset::I;
    if (name == "II") return PriorPreset::II;
    if (name == "III") return PriorPreset::III;
    if (name == "IV") return PriorPreset::IV;
    throw ConfigError("unknown prior preset: " + std::string(name) +
                      " (expected I, II, III or IV)");
}

std::string to_string(PriorPreset p) {
    switch (p) {
        case PriorPreset::I: return "I";
        case PriorPreset::II: return "II";
        case PriorPreset::III: return "III";
        case PriorPreset::IV: return "IV";
    }
    throw std::invalid_argument("bad prior preset");
}

PriorSpec preset(PriorPreset which, double delta) {
    require(std::isfinite(delta) && delta > 0.0, "preset: delta must be > 0");
    PriorSpec s;
    s.A_mu = 1.0;
    s.a_U = 1.0;
    s.b_U = 1.0;
    s.nu_L = 10.0 * delta;
    switch (which) {
        case PriorPreset::I:
            s.mu0 = 0.1;
            s.nu_h = 5.0;
            s.A_h = 1.0;
            s.nu_etaU = 2.56;
            s.A_etaU = 0.00576;
            s.nu_etaD = 2.56;
            s.A_etaD = 0.00576;
            break;
        case PriorPreset::II:
            s.mu0 = 0.0;
            s.nu_h = 5.0;
            s.A_h = 1.0;
            s.nu_etaU = 0.5;
            s.A_etaU = 1.0;
            s.nu_etaD = 0.5;
            s.A_etaD = 1.0;
            break;
        case PriorPreset::III:
            s.mu0 = 0.0;
            s.nu_h = 5.0;
            s.A_h = 1.0;
            s.nu_etaU = 1.86;
            s.A_etaU = 0.43;
            s.nu_etaD = 1.86;
            s.A_etaD = 0.43;
            break;
        case PriorPreset::IV:
            s.mu0 = 0.0;
            s.nu_h = 2.56;
            s.A_h = 0.00576;
            s.nu_etaU = 2.56;
            s.A_etaU = 0.00576;
            s.nu_etaD = 2.56;
            s.A_etaD = 0.00576;
            break;
    }
    return s;
}

std::vector<std::string> validation_warnings(const PriorSpec& spec) {
    std::vector<std::string> warnings;
    if (spec.nu_L < 0.1) {
        warnings.push_back(
            "prior on L is a chi-square with " + std::to_string(spec.nu_L) +
            " degrees of freedom; this near-degenerate prior concentrates L at "
            "extremely small values a priori");
    }
    return warnings;
}

ModelParams prior_sample(const PriorSpec& spec, RngStream& rng) {
    spec.validate();
    ModelParams p;
    p.h = gamma_sample(spec.nu_h, spec.A_h, rng);
    p.mu_prime = normal_sample(spec.mu0, 1.0 / (p.h * spec.A_mu), rng);
    p.L = gamma_sample(0.5 * spec.nu_L, 0.5, rng);  // chi-square(nu_L)
    p.p_U = beta_sample(spec.a_U, spec.b_U, rng);
    p.eta_U = gamma_sample(spec.nu_etaU, spec.A_etaU, rng);
    p.eta_D = gamma_sample(spec.nu_etaD, spec.A_etaD, rng);
    return p;
}

double prior_log_pdf(const PriorSpec& spec, const ModelParams& params) {
    spec.validate();
    if (!(params.h > 0.0)) return kNegInf;
    double lp = gamma_log_pdf(params.h, spec.nu_h, spec.A_h);
    const double prec = params.h * spec.A_mu;
    const double d = params.mu_prime - spec.mu0;
    lp += 0.5 * std::log(prec) - 0.5 * kLog2Pi - 0.5 * prec * d * d;
    lp += chi_square_log_pdf(params.L, spec.nu_L);
    lp += beta_log_pdf(params.p_U, spec.a_U, spec.b_U);
    lp += gamma_log_pdf(params.eta_U, spec.nu_etaU, spec.A_etaU);
    lp += gamma_log_pdf(params.eta_D, spec.nu_etaD, spec.A_etaD);
    return lp;
}

}  // namespace dejd
