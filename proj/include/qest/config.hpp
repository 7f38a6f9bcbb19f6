#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qest/ensemble.hpp"
#include "qest/strategy.hpp"

namespace qest {

// Flat key=value configuration with dotted section keys, e.g.
// "strategy.a=1.57". '#' starts a comment; blank lines are ignored.
// Unknown keys are rejected at build time so typos do not pass silently.
class KeyValueConfig {
  public:
    void load_file(const std::string& path);
    void parse_line(const std::string& line);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;  // "inf" allowed
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Sorted "key=value" lines of everything set, for provenance echoes.
    std::string resolved_text() const;

    const std::map<std::string, std::string>& entries() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

// Builders from the flat config; each fills in the documented defaults,
// validates, and writes the fully resolved values back into cfg so the
// provenance echo reflects what actually ran.
SessionConfig build_session_config(KeyValueConfig& cfg);
EnsembleConfig build_ensemble_config(KeyValueConfig& cfg);
GridSpec build_grid_spec(KeyValueConfig& cfg);
SystemParams build_truth_params(KeyValueConfig& cfg);

// Throws std::invalid_argument listing any key outside the known set.
void reject_unknown_keys(const KeyValueConfig& cfg);

}  // namespace qest
