#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dejd/errors.hpp"
#include "dejd/posterior.hpp"

namespace dejd::io {

enum class InputKind { prices, returns };

InputKind input_kind_from_name(std::string_view name);
std::string to_string(InputKind k);

/// Ground-truth parameters used by the simulate subcommand (moment
/// parametrization, converted internally).
struct SimTruth {
    double mu = 0.25;
    double sigma = 0.4;
    double lambda = 30.0;
    double p_U = 0.5;
    double eta_U = 30.0;
    double eta_D = 5.0;
    std::int64_t n = 10000;
};

/// Fully resolved run configuration shared by all subcommands. Built from a
/// flat key = value file, then overridden by command-line flags.
struct RunConfig {
    std::string input;
    InputKind kind = InputKind::returns;
    double delta = kTradingDayDelta;
    PriorPreset prior = PriorPreset::I;
    std::map<std::string, double> prior_overrides;
    std::int64_t burn_in = 0;
    std::int64_t draws = 1000;
    std::int64_t thin = 1;
    LSampler l_sampler = LSampler::auto_select;
    std::uint64_t seed = 1;
    std::string init_mode = "prior";  // "prior" or "user"
    std::map<std::string, double> init_fields;
    double tau = 0.5;
    std::string out = ".";
    bool store_full_latents = false;
    bool emit_diagnostics = false;
    SimTruth sim;

    PriorSpec resolved_prior() const;
    std::optional<ModelParams> resolved_init() const;
    ChainConfig chain_config() const;
    void validate(bool need_input) const;
};

RunConfig parse_config_file(const std::filesystem::path& path);

/// Apply one key = value pair (the config-file grammar; also used by flag
/// overrides). Unknown keys raise ConfigError; "report." keys are ignored
/// so a manifest can be fed back in as a config.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Hash of the resolved configuration (canonical serialization, FNV-1a).
std::uint64_t config_hash(const RunConfig& cfg, const std::string& command);

/// Decimal text with enough digits to round-trip a double exactly.
std::string format_g17(double v);

ReturnsSeries ingest(const std::filesystem::path& path, InputKind kind, double delta);

// --- file writers (write to a temp file, then atomic rename) ---

void write_returns(const std::filesystem::path& path, const ReturnsSeries& series);
void write_latents(const std::filesystem::path& path, const LatentState& latents);
void write_draws(const std::filesystem::path& path, const Chain& chain);
void write_jump_probs(const std::filesystem::path& path, const JumpProbabilities& probs);
void write_summary(const std::filesystem::path& path, const PosteriorSummary& summary);
void write_jump_report(const std::filesystem::path& days_path,
                       const std::filesystem::path& summary_path,
                       const JumpReport& report, const ReturnsSeries& x);
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::string& command, const Chain* chain);

Chain read_draws(const std::filesystem::path& path, double delta);
JumpProbabilities read_jump_probs(const std::filesystem::path& path);

// --- subcommand drivers ---

void cmd_simulate(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_summarize(const RunConfig& cfg);
void cmd_jumps(const RunConfig& cfg);
void cmd_diagnose(const RunConfig& cfg);

}  // namespace dejd::io
