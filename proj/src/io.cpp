#include "dejd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <vector>

namespace dejd::io {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kPriorFieldNames = {
    "A_etaD", "A_etaU", "A_h", "A_mu", "a_U", "b_U",
    "mu0",    "nu_L",   "nu_etaD", "nu_etaU", "nu_h"};

const std::vector<std::string> kInitFieldNames = {
    "L", "eta_D", "eta_U", "h", "mu_prime", "p_U"};

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(ws);
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t' || c == ' ') {
            if (!current.empty()) {
                tokens.push_back(current);
                current.clear();
            }
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

bool parse_double(const std::string& token, double& value) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, value);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_int64(const std::string& token, std::int64_t& value) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, value);
    return res.ec == std::errc() && res.ptr == last;
}

double config_double(const std::string& key, const std::string& value) {
    double v;
    if (!parse_double(value, v)) {
        throw ConfigError("config key '" + key + "': not a number: " + value);
    }
    return v;
}

std::int64_t config_int64(const std::string& key, const std::string& value) {
    std::int64_t v;
    if (!parse_int64(value, v)) {
        throw ConfigError("config key '" + key + "': not an integer: " + value);
    }
    return v;
}

std::uint64_t config_uint64(const std::string& key, const std::string& value) {
    std::uint64_t v;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ConfigError("config key '" + key + "': not an unsigned integer: " + value);
    }
    return v;
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false: " + value);
}

// All resolved (non-report) manifest entries, in a fixed canonical order.
std::vector<std::pair<std::string, std::string>> canonical_entries(
    const RunConfig& cfg, const std::string& command) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("command", command);
    e.emplace_back("burn_in", std::to_string(cfg.burn_in));
    e.emplace_back("delta", format_g17(cfg.delta));
    e.emplace_back("draws", std::to_string(cfg.draws));
    e.emplace_back("emit_diagnostics", cfg.emit_diagnostics ? "true" : "false");
    e.emplace_back("init", cfg.init_mode);
    if (cfg.init_mode == "user") {
        const ModelParams p = *cfg.resolved_init();
        e.emplace_back("init.L", format_g17(p.L));
        e.emplace_back("init.eta_D", format_g17(p.eta_D));
        e.emplace_back("init.eta_U", format_g17(p.eta_U));
        e.emplace_back("init.h", format_g17(p.h));
        e.emplace_back("init.mu_prime", format_g17(p.mu_prime));
        e.emplace_back("init.p_U", format_g17(p.p_U));
    }
    e.emplace_back("input", cfg.input);
    e.emplace_back("kind", to_string(cfg.kind));
    e.emplace_back("l_sampler", to_string(cfg.l_sampler));
    e.emplace_back("out", cfg.out);
    e.emplace_back("prior", to_string(cfg.prior));
    const PriorSpec spec = cfg.resolved_prior();
    e.emplace_back("prior.A_etaD", format_g17(spec.A_etaD));
    e.emplace_back("prior.A_etaU", format_g17(spec.A_etaU));
    e.emplace_back("prior.A_h", format_g17(spec.A_h));
    e.emplace_back("prior.A_mu", format_g17(spec.A_mu));
    e.emplace_back("prior.a_U", format_g17(spec.a_U));
    e.emplace_back("prior.b_U", format_g17(spec.b_U));
    e.emplace_back("prior.mu0", format_g17(spec.mu0));
    e.emplace_back("prior.nu_L", format_g17(spec.nu_L));
    e.emplace_back("prior.nu_etaD", format_g17(spec.nu_etaD));
    e.emplace_back("prior.nu_etaU", format_g17(spec.nu_etaU));
    e.emplace_back("prior.nu_h", format_g17(spec.nu_h));
    e.emplace_back("seed", std::to_string(cfg.seed));
    if (command == "simulate") {
        e.emplace_back("sim.eta_D", format_g17(cfg.sim.eta_D));
        e.emplace_back("sim.eta_U", format_g17(cfg.sim.eta_U));
        e.emplace_back("sim.lambda", format_g17(cfg.sim.lambda));
        e.emplace_back("sim.mu", format_g17(cfg.sim.mu));
        e.emplace_back("sim.n", std::to_string(cfg.sim.n));
        e.emplace_back("sim.p_U", format_g17(cfg.sim.p_U));
        e.emplace_back("sim.sigma", format_g17(cfg.sim.sigma));
    }
    e.emplace_back("store_full_latents", cfg.store_full_latents ? "true" : "false");
    e.emplace_back("tau", format_g17(cfg.tau));
    e.emplace_back("thin", std::to_string(cfg.thin));
    return e;
}

// Write-to-temp with atomic rename; the temp file is removed if the writer
// is destroyed before commit().
class AtomicFile {
public:
    explicit AtomicFile(fs::path path)
        : path_(std::move(path)), tmp_(path_.string() + ".tmp"), out_(tmp_, std::ios::binary | std::ios::trunc) {
        if (!out_) throw DataError("cannot open for writing: " + tmp_.string());
    }

    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }

    std::ostream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw DataError("write failed: " + tmp_.string());
        out_.close();
        fs::rename(tmp_, path_);
        committed_ = true;
    }

private:
    fs::path path_;
    fs::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

void expect_header(std::ifstream& in, const fs::path& path, const std::string& expected) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty file: " + path.string());
    }
    if (trim(line) != expected) {
        throw DataError("unexpected header in " + path.string() + ": got '" + trim(line) +
                        "', expected '" + expected + "'");
    }
}

void write_diagnostics_files(const fs::path& out_dir, const Chain& chain) {
    AtomicFile summary(out_dir / "diagnostics.txt");
    for (const auto& name : diagnostic_parameter_names()) {
        const Eigen::VectorXd values = param_series(chain, name);
        const ErgodicPaths paths = ergodic_paths(chain, name);
        const Eigen::VectorXd cusum = cusum_path(chain, name);

        AtomicFile file(out_dir / ("diag_" + name + ".csv"));
        file.stream() << "t,value,running_mean,running_std,cusum\n";
        for (Eigen::Index t = 0; t < values.size(); ++t) {
            file.stream() << (t + 1) << ',' << format_g17(values[t]) << ','
                          << format_g17(paths.running_mean[t]) << ','
                          << format_g17(paths.running_std[t]) << ','
                          << format_g17(cusum[t]) << '\n';
        }
        file.commit();
        summary.stream() << "sign_crossings." << name << " = " << sign_crossings(cusum)
                         << '\n';
    }
    summary.commit();
}

}  // namespace

InputKind input_kind_from_name(std::string_view name) {
    if (name == "prices") return InputKind::prices;
    if (name == "returns") return InputKind::returns;
    throw ConfigError("unknown input kind: " + std::string(name) +
                      " (expected prices or returns)");
}

std::string to_string(InputKind k) {
    return k == InputKind::prices ? "prices" : "returns";
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PriorSpec RunConfig::resolved_prior() const {
    PriorSpec spec = preset(prior, delta);
    for (const auto& [field, value] : prior_overrides) {
        if (field == "mu0") spec.mu0 = value;
        else if (field == "A_mu") spec.A_mu = value;
        else if (field == "nu_h") spec.nu_h = value;
        else if (field == "A_h") spec.A_h = value;
        else if (field == "a_U") spec.a_U = value;
        else if (field == "b_U") spec.b_U = value;
        else if (field == "nu_etaU") spec.nu_etaU = value;
        else if (field == "A_etaU") spec.A_etaU = value;
        else if (field == "nu_etaD") spec.nu_etaD = value;
        else if (field == "nu_L") spec.nu_L = value;
        else if (field == "A_etaD") spec.A_etaD = value;
        else throw ConfigError("unknown prior field: " + field);
    }
    spec.validate();
    return spec;
}

std::optional<ModelParams> RunConfig::resolved_init() const {
    if (init_mode == "prior") return std::nullopt;
    if (init_mode != "user") {
        throw ConfigError("init must be 'prior' or 'user', got: " + init_mode);
    }
    ModelParams p{};
    for (const auto& field : kInitFieldNames) {
        if (init_fields.find(field) == init_fields.end()) {
            throw ConfigError("init = user requires init." + field);
        }
    }
    p.mu_prime = init_fields.at("mu_prime");
    p.h = init_fields.at("h");
    p.L = init_fields.at("L");
    p.p_U = init_fields.at("p_U");
    p.eta_U = init_fields.at("eta_U");
    p.eta_D = init_fields.at("eta_D");
    p.validate();
    return p;
}

ChainConfig RunConfig::chain_config() const {
    ChainConfig cc;
    cc.burn_in = burn_in;
    cc.draws = draws;
    cc.thin = thin;
    cc.l_sampler = l_sampler;
    cc.seed = seed;
    cc.init = resolved_init();
    cc.store_full_latents = store_full_latents;
    return cc;
}

void RunConfig::validate(bool need_input) const {
    if (!(std::isfinite(delta) && delta > 0.0)) throw ConfigError("delta must be > 0");
    if (!(std::isfinite(tau) && tau > 0.0 && tau < 1.0)) {
        throw ConfigError("tau must be in (0,1)");
    }
    if (out.empty()) throw ConfigError("output directory must not be empty");
    if (need_input) {
        if (input.empty()) throw ConfigError("input path required");
        if (!fs::exists(input)) throw ConfigError("input path does not exist: " + input);
    }
    chain_config().validate();
    resolved_prior();
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command" || key.rfind("report.", 0) == 0) return;  // informational
    if (key == "input") { cfg.input = value; return; }
    if (key == "kind") { cfg.kind = input_kind_from_name(value); return; }
    if (key == "delta") { cfg.delta = config_double(key, value); return; }
    if (key == "prior") { cfg.prior = prior_preset_from_name(value); return; }
    if (key.rfind("prior.", 0) == 0) {
        const std::string field = key.substr(6);
        if (std::find(kPriorFieldNames.begin(), kPriorFieldNames.end(), field) ==
            kPriorFieldNames.end()) {
            throw ConfigError("unknown prior field: " + field);
        }
        cfg.prior_overrides[field] = config_double(key, value);
        return;
    }
    if (key == "burn_in") { cfg.burn_in = config_int64(key, value); return; }
    if (key == "draws") { cfg.draws = config_int64(key, value); return; }
    if (key == "thin") { cfg.thin = config_int64(key, value); return; }
    if (key == "l_sampler") { cfg.l_sampler = l_sampler_from_name(value); return; }
    if (key == "seed") { cfg.seed = config_uint64(key, value); return; }
    if (key == "tau") { cfg.tau = config_double(key, value); return; }
    if (key == "out") { cfg.out = value; return; }
    if (key == "store_full_latents") { cfg.store_full_latents = config_bool(key, value); return; }
    if (key == "emit_diagnostics") { cfg.emit_diagnostics = config_bool(key, value); return; }
    if (key == "init") { cfg.init_mode = value; return; }
    if (key.rfind("init.", 0) == 0) {
        const std::string field = key.substr(5);
        if (std::find(kInitFieldNames.begin(), kInitFieldNames.end(), field) ==
            kInitFieldNames.end()) {
            throw ConfigError("unknown init field: " + field);
        }
        cfg.init_fields[field] = config_double(key, value);
        return;
    }
    if (key == "sim.mu") { cfg.sim.mu = config_double(key, value); return; }
    if (key == "sim.sigma") { cfg.sim.sigma = config_double(key, value); return; }
    if (key == "sim.lambda") { cfg.sim.lambda = config_double(key, value); return; }
    if (key == "sim.p_U") { cfg.sim.p_U = config_double(key, value); return; }
    if (key == "sim.eta_U") { cfg.sim.eta_U = config_double(key, value); return; }
    if (key == "sim.eta_D") { cfg.sim.eta_D = config_double(key, value); return; }
    if (key == "sim.n") { cfg.sim.n = config_int64(key, value); return; }
    throw ConfigError("unknown config key: " + key);
}

RunConfig parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        apply_key(cfg, key, value);
    }
    return cfg;
}

std::uint64_t config_hash(const RunConfig& cfg, const std::string& command) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto feed = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001B3ull;
        }
    };
    for (const auto& [key, value] : canonical_entries(cfg, command)) {
        feed(key);
        feed("=");
        feed(value);
        feed("\n");
    }
    return h;
}

ReturnsSeries ingest(const fs::path& path, InputKind kind, double delta) {
    if (!(std::isfinite(delta) && delta > 0.0)) throw ConfigError("delta must be > 0");
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path.string());

    std::vector<double> raw;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (!header_seen) {
            header_seen = true;  // header row is required and skipped
            continue;
        }
        const std::vector<std::string> tokens = split_record(stripped);
        if (kind == InputKind::prices) {
            if (tokens.size() != 2) {
                throw DataError("line " + std::to_string(line_no) +
                                ": expected 2 columns (date, price)");
            }
            double price;
            if (!parse_double(tokens[1], price) || !std::isfinite(price)) {
                throw DataError("line " + std::to_string(line_no) +
                                ": malformed price: " + tokens[1]);
            }
            if (price <= 0.0) {
                throw DataError("line " + std::to_string(line_no) +
                                ": non-positive price: " + tokens[1]);
            }
            raw.push_back(price);
        } else {
            if (tokens.size() != 1) {
                throw DataError("line " + std::to_string(line_no) +
                                ": expected a single return column");
            }
            double r;
            if (!parse_double(tokens[0], r) || !std::isfinite(r)) {
                throw DataError("line " + std::to_string(line_no) +
                                ": malformed return: " + tokens[0]);
            }
            raw.push_back(r);
        }
    }
    if (!header_seen) throw DataError("empty input file: " + path.string());
    if (raw.size() < 2) {
        throw DataError("fewer than 2 usable data points in " + path.string());
    }

    ReturnsSeries series;
    series.delta = delta;
    if (kind == InputKind::prices) {
        series.values.resize(static_cast<Eigen::Index>(raw.size()) - 1);
        for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
            series.values[static_cast<Eigen::Index>(i)] = std::log(raw[i + 1] / raw[i]);
        }
    } else {
        series.values = Eigen::Map<const Eigen::VectorXd>(
            raw.data(), static_cast<Eigen::Index>(raw.size()));
    }
    series.validate();
    return series;
}

void write_returns(const fs::path& path, const ReturnsSeries& series) {
    AtomicFile file(path);
    file.stream() << "return\n";
    for (Eigen::Index i = 0; i < series.n(); ++i) {
        file.stream() << format_g17(series.values[i]) << '\n';
    }
    file.commit();
}

void write_latents(const fs::path& path, const LatentState& latents) {
    AtomicFile file(path);
    file.stream() << "day_index,xi,J\n";
    for (Eigen::Index i = 0; i < latents.n(); ++i) {
        file.stream() << i << ',' << latents.xi[i] << ',' << format_g17(latents.J[i])
                      << '\n';
    }
    file.commit();
}

void write_draws(const fs::path& path, const Chain& chain) {
    AtomicFile file(path);
    file.stream() << "sweep_index,mu_prime,h,L,p_U,eta_D,eta_U,n_minus1,n_plus1\n";
    for (const Draw& d : chain.samples) {
        file.stream() << d.sweep_index << ',' << format_g17(d.params.mu_prime) << ','
                      << format_g17(d.params.h) << ',' << format_g17(d.params.L) << ','
                      << format_g17(d.params.p_U) << ',' << format_g17(d.params.eta_D)
                      << ',' << format_g17(d.params.eta_U) << ',' << d.n_minus1 << ','
                      << d.n_plus1 << '\n';
    }
    file.commit();
}

void write_jump_probs(const fs::path& path, const JumpProbabilities& probs) {
    AtomicFile file(path);
    file.stream() << "day_index,p_minus,p_plus\n";
    for (Eigen::Index i = 0; i < probs.p_minus.size(); ++i) {
        file.stream() << i << ',' << format_g17(probs.p_minus[i]) << ','
                      << format_g17(probs.p_plus[i]) << '\n';
    }
    file.commit();
}

void write_summary(const fs::path& path, const PosteriorSummary& summary) {
    AtomicFile file(path);
    file.stream() << "parameter,mean,sd\n";
    for (const SummaryRow& row : summary.rows) {
        file.stream() << row.name << ',' << format_g17(row.mean) << ','
                      << format_g17(row.sd) << '\n';
    }
    file.commit();
}

void write_jump_report(const fs::path& days_path, const fs::path& summary_path,
                       const JumpReport& report, const ReturnsSeries& x) {
    AtomicFile days(days_path);
    days.stream() << "day_index,side,x,probability\n";
    for (const Eigen::Index i : report.down_days) {
        days.stream() << i << ",down," << format_g17(x.values[i]) << ','
                      << format_g17(report.p_minus[i]) << '\n';
    }
    for (const Eigen::Index i : report.up_days) {
        days.stream() << i << ",up," << format_g17(x.values[i]) << ','
                      << format_g17(report.p_plus[i]) << '\n';
    }
    days.commit();

    AtomicFile summary(summary_path);
    summary.stream() << "tau = " << format_g17(report.tau) << '\n';
    summary.stream() << "n_down_detected = " << report.down_days.size() << '\n';
    summary.stream() << "n_up_detected = " << report.up_days.size() << '\n';
    summary.stream() << "xbar_n = " << format_g17(report.xbar_n) << '\n';
    summary.stream() << "sigma_n = " << format_g17(report.sigma_n) << '\n';
    if (report.J_D) summary.stream() << "J_D = " << format_g17(*report.J_D) << '\n';
    if (report.k_D) summary.stream() << "k_D = " << format_g17(*report.k_D) << '\n';
    if (report.J_U) summary.stream() << "J_U = " << format_g17(*report.J_U) << '\n';
    if (report.k_U) summary.stream() << "k_U = " << format_g17(*report.k_U) << '\n';
    summary.commit();
}

void write_manifest(const fs::path& path, const RunConfig& cfg, const std::string& command,
                    const Chain* chain) {
    AtomicFile file(path);
    for (const auto& [key, value] : canonical_entries(cfg, command)) {
        file.stream() << key << " = " << value << '\n';
    }
    file.stream() << "report.config_hash = " << config_hash(cfg, command) << '\n';
    if (chain) {
        const AcceptanceStats& acc = chain->acceptance;
        file.stream() << "report.retained = " << chain->retained() << '\n';
        file.stream() << "report.l_mh_proposed = " << acc.l_mh_proposed << '\n';
        file.stream() << "report.l_mh_accepted = " << acc.l_mh_accepted << '\n';
        if (acc.l_mh_proposed > 0) {
            file.stream() << "report.l_mh_acceptance_rate = "
                          << format_g17(static_cast<double>(acc.l_mh_accepted) /
                                        static_cast<double>(acc.l_mh_proposed))
                          << '\n';
        }
        file.stream() << "report.l_ar_attempts = " << acc.l_ar_attempts << '\n';
        file.stream() << "report.l_ar_draws = " << acc.l_ar_draws << '\n';
        if (acc.l_ar_attempts > 0) {
            file.stream() << "report.l_ar_acceptance_rate = "
                          << format_g17(static_cast<double>(acc.l_ar_draws) /
                                        static_cast<double>(acc.l_ar_attempts))
                          << '\n';
        }
        file.stream() << "report.l_ar_fallbacks = " << acc.l_ar_fallbacks << '\n';
    }
    file.commit();
}

Chain read_draws(const fs::path& path, double delta) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open draws file: " + path.string());
    expect_header(in, path, "sweep_index,mu_prime,h,L,p_U,eta_D,eta_U,n_minus1,n_plus1");

    Chain chain;
    chain.delta = delta;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> tokens = split_record(stripped);
        if (tokens.size() != 9) {
            throw DataError("draws line " + std::to_string(line_no) + ": expected 9 columns");
        }
        Draw d{};
        bool ok = parse_int64(tokens[0], d.sweep_index);
        ok = ok && parse_double(tokens[1], d.params.mu_prime);
        ok = ok && parse_double(tokens[2], d.params.h);
        ok = ok && parse_double(tokens[3], d.params.L);
        ok = ok && parse_double(tokens[4], d.params.p_U);
        ok = ok && parse_double(tokens[5], d.params.eta_D);
        ok = ok && parse_double(tokens[6], d.params.eta_U);
        ok = ok && parse_int64(tokens[7], d.n_minus1);
        ok = ok && parse_int64(tokens[8], d.n_plus1);
        if (!ok) throw DataError("draws line " + std::to_string(line_no) + ": malformed row");
        try {
            d.params.validate();
        } catch (const std::invalid_argument& e) {
            throw DataError("draws line " + std::to_string(line_no) + ": " + e.what());
        }
        chain.samples.push_back(d);
    }
    return chain;
}

JumpProbabilities read_jump_probs(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open jump probability file: " + path.string());
    expect_header(in, path, "day_index,p_minus,p_plus");

    std::vector<double> p_minus;
    std::vector<double> p_plus;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> tokens = split_record(stripped);
        double pm, pp;
        std::int64_t day;
        if (tokens.size() != 3 || !parse_int64(tokens[0], day) ||
            !parse_double(tokens[1], pm) || !parse_double(tokens[2], pp)) {
            throw DataError("jump probability line " + std::to_string(line_no) +
                            ": malformed row");
        }
        p_minus.push_back(pm);
        p_plus.push_back(pp);
    }
    JumpProbabilities probs;
    probs.p_minus = Eigen::Map<const Eigen::VectorXd>(
        p_minus.data(), static_cast<Eigen::Index>(p_minus.size()));
    probs.p_plus = Eigen::Map<const Eigen::VectorXd>(
        p_plus.data(), static_cast<Eigen::Index>(p_plus.size()));
    return probs;
}

void cmd_simulate(const RunConfig& cfg) {
    cfg.validate(false);
    if (cfg.sim.n < 1) throw ConfigError("sim.n must be >= 1");
    const ModelParams truth =
        ModelParams::from_moments(cfg.sim.mu, cfg.sim.sigma, cfg.sim.lambda, cfg.sim.p_U,
                                  cfg.sim.eta_U, cfg.sim.eta_D, cfg.delta);
    RngStream rng(cfg.seed);
    const SimulatedPath path = simulate(truth, cfg.sim.n, cfg.delta, rng);

    const fs::path out_dir(cfg.out);
    fs::create_directories(out_dir);
    write_returns(out_dir / "returns.csv", path.returns);
    write_latents(out_dir / "latents.csv", path.latents);
    write_manifest(out_dir / "manifest.txt", cfg, "simulate", nullptr);
}

void cmd_fit(const RunConfig& cfg) {
    cfg.validate(true);
    const ReturnsSeries series = ingest(cfg.input, cfg.kind, cfg.delta);
    const PriorSpec spec = cfg.resolved_prior();
    const Chain chain = run_chain(series, spec, cfg.chain_config());

    const fs::path out_dir(cfg.out);
    fs::create_directories(out_dir);
    write_draws(out_dir / "draws.csv", chain);
    write_jump_probs(out_dir / "jumpprobs.csv", jump_probabilities(chain));
    if (cfg.store_full_latents) {
        AtomicFile file(out_dir / "latents_draws.csv");
        file.stream() << "draw,day_index,xi,J\n";
        for (std::size_t d = 0; d < chain.latent_draws.size(); ++d) {
            const LatentState& latents = chain.latent_draws[d];
            for (Eigen::Index i = 0; i < latents.n(); ++i) {
                file.stream() << d << ',' << i << ',' << latents.xi[i] << ','
                              << format_g17(latents.J[i]) << '\n';
            }
        }
        file.commit();
    }
    if (cfg.emit_diagnostics) write_diagnostics_files(out_dir, chain);
    write_manifest(out_dir / "manifest.txt", cfg, "fit", &chain);
}

void cmd_summarize(const RunConfig& cfg) {
    cfg.validate(false);
    const fs::path out_dir(cfg.out);
    Chain chain = read_draws(out_dir / "draws.csv", cfg.delta);
    chain.config.seed = cfg.seed;
    chain.config.burn_in = cfg.burn_in;
    chain.config.thin = cfg.thin;
    const PosteriorSummary summary = summarize(chain, cfg.delta);
    write_summary(out_dir / "summary.csv", summary);
}

void cmd_jumps(const RunConfig& cfg) {
    cfg.validate(true);
    const fs::path out_dir(cfg.out);
    const JumpProbabilities probs = read_jump_probs(out_dir / "jumpprobs.csv");
    const ReturnsSeries series = ingest(cfg.input, cfg.kind, cfg.delta);
    const JumpReport report = detect_jumps(probs, series, cfg.tau);
    write_jump_report(out_dir / "jumps.csv", out_dir / "jump_summary.txt", report, series);
}

void cmd_diagnose(const RunConfig& cfg) {
    cfg.validate(false);
    const fs::path out_dir(cfg.out);
    const Chain chain = read_draws(out_dir / "draws.csv", cfg.delta);
    write_diagnostics_files(out_dir, chain);
}

}  // namespace dejd::io
