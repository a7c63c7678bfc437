// dejd: Bayesian estimation of the double exponential jump-diffusion model
// for daily log-returns, with latent-variable jump detection.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dejd/io.hpp"

namespace {

struct FlagOverrides {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> prior;
    std::optional<std::int64_t> burn_in;
    std::optional<std::int64_t> draws;
    std::optional<std::int64_t> thin;
    std::optional<std::string> l_sampler;
    std::optional<double> tau;
    std::optional<double> delta;
    std::optional<std::string> input;
    std::optional<std::string> kind;
    std::optional<std::string> out;
    std::optional<bool> store_full_latents;
    std::optional<bool> emit_diagnostics;
};

void add_common_options(CLI::App* cmd, FlagOverrides& flags) {
    cmd->add_option("--config", flags.config, "Run configuration file (key = value)");
    cmd->add_option("--seed", flags.seed, "RNG seed");
    cmd->add_option("--prior", flags.prior, "Prior preset: I, II, III or IV");
    cmd->add_option("--burn-in", flags.burn_in, "Discarded warm-up sweeps");
    cmd->add_option("--draws", flags.draws, "Post burn-in sweeps");
    cmd->add_option("--thin", flags.thin, "Keep every thin-th sweep");
    cmd->add_option("--l-sampler", flags.l_sampler, "L sampler: mh, ar or auto");
    cmd->add_option("--tau", flags.tau, "Jump detection threshold in (0,1)");
    cmd->add_option("--delta", flags.delta, "Time step between observations");
    cmd->add_option("--input", flags.input, "Input data file");
    cmd->add_option("--kind", flags.kind, "Input kind: prices or returns");
    cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_flag("--store-full-latents", [&flags](std::int64_t) { flags.store_full_latents = true; },
                  "Record the full latent state of every retained draw");
    cmd->add_flag("--emit-diagnostics", [&flags](std::int64_t) { flags.emit_diagnostics = true; },
                  "Also write ergodic/CUSUM diagnostic series after a fit");
}

dejd::io::RunConfig build_config(const FlagOverrides& flags) {
    dejd::io::RunConfig cfg;
    if (flags.config) cfg = dejd::io::parse_config_file(*flags.config);
    if (flags.seed) dejd::io::apply_key(cfg, "seed", std::to_string(*flags.seed));
    if (flags.prior) dejd::io::apply_key(cfg, "prior", *flags.prior);
    if (flags.burn_in) dejd::io::apply_key(cfg, "burn_in", std::to_string(*flags.burn_in));
    if (flags.draws) dejd::io::apply_key(cfg, "draws", std::to_string(*flags.draws));
    if (flags.thin) dejd::io::apply_key(cfg, "thin", std::to_string(*flags.thin));
    if (flags.l_sampler) dejd::io::apply_key(cfg, "l_sampler", *flags.l_sampler);
    if (flags.tau) dejd::io::apply_key(cfg, "tau", dejd::io::format_g17(*flags.tau));
    if (flags.delta) dejd::io::apply_key(cfg, "delta", dejd::io::format_g17(*flags.delta));
    if (flags.input) dejd::io::apply_key(cfg, "input", *flags.input);
    if (flags.kind) dejd::io::apply_key(cfg, "kind", *flags.kind);
    if (flags.out) dejd::io::apply_key(cfg, "out", *flags.out);
    if (flags.store_full_latents) dejd::io::apply_key(cfg, "store_full_latents", "true");
    if (flags.emit_diagnostics) dejd::io::apply_key(cfg, "emit_diagnostics", "true");
    return cfg;
}

void print_prior_warnings(const dejd::io::RunConfig& cfg) {
    for (const std::string& w : dejd::validation_warnings(cfg.resolved_prior())) {
        std::cerr << "warning: " << w << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian double exponential jump-diffusion (DEJD) estimation"};
    app.require_subcommand(1);

    FlagOverrides flags;
    CLI::App* sim = app.add_subcommand("simulate", "Generate a synthetic return series with ground-truth latents");
    CLI::App* fit = app.add_subcommand("fit", "Run the Gibbs sampler on a return or price series");
    CLI::App* summ = app.add_subcommand("summarize", "Posterior means/sds from a fitted chain");
    CLI::App* jumps = app.add_subcommand("jumps", "Detect jump days from posterior probabilities");
    CLI::App* diag = app.add_subcommand("diagnose", "Write ergodic mean/sd and CUSUM series per parameter");
    for (CLI::App* cmd : {sim, fit, summ, jumps, diag}) add_common_options(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const dejd::io::RunConfig cfg = build_config(flags);
        if (sim->parsed()) {
            dejd::io::cmd_simulate(cfg);
        } else if (fit->parsed()) {
            print_prior_warnings(cfg);
            dejd::io::cmd_fit(cfg);
        } else if (summ->parsed()) {
            dejd::io::cmd_summarize(cfg);
        } else if (jumps->parsed()) {
            dejd::io::cmd_jumps(cfg);
        } else if (diag->parsed()) {
            dejd::io::cmd_diagnose(cfg);
        }
    } catch (const dejd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dejd::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
