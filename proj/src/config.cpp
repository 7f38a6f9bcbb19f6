#include "qest/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qest {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" +
                                    value + "'");
    }
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void KeyValueConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) parse_line(line);
}

void KeyValueConfig::parse_line(const std::string& line) {
    std::string s = line;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.resize(hash);
    s = trim(s);
    if (s.empty()) return;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: malformed line '" + line + "' (expected key=value)");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config: empty key in '" + line + "'");
    set(key, trim(s.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) const {
    const double d = get_double(key, static_cast<double>(fallback));
    if (d < 0 || d != std::floor(d) || std::isinf(d))
        throw std::invalid_argument("config: key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(d);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: key '" + key + "' has non-boolean value '" + v + "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw std::invalid_argument("config: key '" + key + "' has an empty list value");
    return out;
}

std::string KeyValueConfig::resolved_text() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

namespace {

// Reads a value with its default and writes the resolved value back.
double resolve(KeyValueConfig& cfg, const std::string& key, double fallback) {
    const double v = cfg.get_double(key, fallback);
    cfg.set(key, format_double(v));
    return v;
}

std::size_t resolve_size(KeyValueConfig& cfg, const std::string& key, std::size_t fallback) {
    const std::size_t v = cfg.get_size(key, fallback);
    cfg.set(key, std::to_string(v));
    return v;
}

bool resolve_bool(KeyValueConfig& cfg, const std::string& key, bool fallback) {
    const bool v = cfg.get_bool(key, fallback);
    cfg.set(key, v ? "true" : "false");
    return v;
}

}  // namespace

SessionConfig build_session_config(KeyValueConfig& cfg) {
    SessionConfig s;
    s.prior.mu_g = resolve(cfg, "prior.mu_g", 1.0);
    s.prior.sigma_g = resolve(cfg, "prior.sigma_g", 0.25);
    s.prior.mu_omega = resolve(cfg, "prior.mu_omega", 0.0);
    s.prior.sigma_omega = resolve(cfg, "prior.sigma_omega", 1.0);
    s.noise.t1 = resolve(cfg, "noise.t1", std::numeric_limits<double>::infinity());
    s.noise.p_e = resolve(cfg, "noise.p_e", 0.0);
    s.strategy.a = resolve(cfg, "strategy.a", 1.57);
    s.strategy.b = resolve(cfg, "strategy.b", 0.518);
    s.strategy.c = resolve(cfg, "strategy.c", 3.0);
    s.strategy.m0 = resolve_size(cfg, "strategy.m0", 15);
    s.strategy.t_max = resolve(cfg, "strategy.t_max", 1e6 / s.prior.mu_g);
    s.strategy.shots_per_setting = resolve_size(cfg, "strategy.shots_per_setting", 1);
    s.n_particles = resolve_size(cfg, "session.n_particles", 5000);
    s.shots = resolve_size(cfg, "session.shots", 600);
    s.restart_protocol = resolve_bool(cfg, "session.restart_protocol", false);
    s.checkpoint_shots = resolve_size(cfg, "session.checkpoint_shots", 300);
    s.verify_shots = resolve_size(cfg, "session.verify_shots", 300);
    s.agreement_threshold = resolve(cfg, "session.agreement_threshold", 1e-2);
    s.max_restarts = resolve_size(cfg, "session.max_restarts", 10);
    s.seed = resolve_size(cfg, "seed", 0);
    s.validate();
    return s;
}

EnsembleConfig build_ensemble_config(KeyValueConfig& cfg) {
    EnsembleConfig e;
    e.session = build_session_config(cfg);
    e.n_runs = resolve_size(cfg, "ensemble.n_runs", 200);
    e.thresholds = cfg.get_double_list("ensemble.thresholds", {1e-10, 1e-7, 1e-4});
    const std::vector<double> default_cp = {150, 300, 600};
    std::vector<double> cp = cfg.get_double_list("ensemble.checkpoints", default_cp);
    e.checkpoints.clear();
    for (double c : cp) e.checkpoints.push_back(static_cast<std::size_t>(c));
    e.omega_error_scale = resolve(cfg, "ensemble.omega_error_scale", 0.0);
    e.seed = e.session.seed;
    e.threads = resolve_size(cfg, "threads", 1);
    if (cfg.has("truth.mu_g") || cfg.has("truth.sigma_g") || cfg.has("truth.mu_omega") ||
        cfg.has("truth.sigma_omega")) {
        e.truth_prior = e.session.prior;
        e.truth_prior.mu_g = resolve(cfg, "truth.mu_g", e.session.prior.mu_g);
        e.truth_prior.sigma_g = resolve(cfg, "truth.sigma_g", e.session.prior.sigma_g);
        e.truth_prior.mu_omega = resolve(cfg, "truth.mu_omega", e.session.prior.mu_omega);
        e.truth_prior.sigma_omega =
            resolve(cfg, "truth.sigma_omega", e.session.prior.sigma_omega);
        e.truth_prior_set = true;
    }
    e.validate();
    return e;
}

GridSpec build_grid_spec(KeyValueConfig& cfg) {
    GridSpec g;
    g.omega_min = resolve(cfg, "grid.omega_min", -3.0);
    g.omega_max = resolve(cfg, "grid.omega_max", 3.0);
    g.omega_count = resolve_size(cfg, "grid.omega_count", 30);
    g.t_min = resolve(cfg, "grid.t_min", 0.0);
    g.t_max = resolve(cfg, "grid.t_max", 18.0);
    g.t_count = resolve_size(cfg, "grid.t_count", 30);
    g.m_r = resolve_size(cfg, "grid.m_r", 1000);
    g.validate();
    return g;
}

SystemParams build_truth_params(KeyValueConfig& cfg) {
    SystemParams t;
    t.g = resolve(cfg, "baseline.truth_g", cfg.get_double("prior.mu_g", 1.0));
    t.omega_r = resolve(cfg, "baseline.truth_omega", cfg.get_double("prior.mu_omega", 0.0));
    t.validate();
    return t;
}

void reject_unknown_keys(const KeyValueConfig& cfg) {
    static const std::array<const char*, 37> known = {
        "prior.mu_g", "prior.sigma_g", "prior.mu_omega", "prior.sigma_omega",
        "noise.t1", "noise.p_e",
        "strategy.a", "strategy.b", "strategy.c", "strategy.m0", "strategy.t_max",
        "strategy.shots_per_setting",
        "session.n_particles", "session.shots", "session.restart_protocol",
        "session.checkpoint_shots", "session.verify_shots", "session.agreement_threshold",
        "session.max_restarts",
        "ensemble.n_runs", "ensemble.thresholds", "ensemble.checkpoints",
        "ensemble.omega_error_scale", "ensemble.target",
        "truth.mu_g", "truth.sigma_g", "truth.mu_omega", "truth.sigma_omega",
        "sweep.axis", "sweep.values",
        "grid.omega_min", "grid.omega_max", "grid.omega_count", "grid.t_min",
        "grid.t_max", "grid.t_count", "grid.m_r",
    };
    static const std::array<const char*, 6> known_extra = {
        "grid.exact", "baseline.truth_g", "baseline.truth_omega", "seed", "threads", "out",
    };
    for (const auto& [key, value] : cfg.entries()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) { found = true; break; }
        for (const char* k : known_extra)
            if (key == k) { found = true; break; }
        if (!found) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

}  // namespace qest
