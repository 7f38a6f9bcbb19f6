#include "qest/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qest {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string shot_csv(const RunRecord& record) {
    std::string out = "shot,omega_q,t,outcome,mean_g,std_g,mean_omega,std_omega\n";
    for (const ShotRecord& s : record.shots) {
        out += std::to_string(s.shot) + ',' + format_number(s.omega_q) + ',' +
               format_number(s.t) + ',' + std::to_string(s.outcome) + ',' +
               format_number(s.mean_g) + ',' + format_number(s.std_g) + ',' +
               format_number(s.mean_omega) + ',' + format_number(s.std_omega) + '\n';
    }
    return out;
}

std::string run_record_json(const RunRecord& record, const std::string& config_echo) {
    nlohmann::ordered_json j;
    j["status"] = to_string(record.status, record.restarts);
    j["estimate"]["g"] = record.est_g;
    j["estimate"]["omega_r"] = record.est_omega;
    j["restarts"] = record.restarts;
    j["total_shots"] = record.total_shots;
    j["config"] = config_echo;
    return j.dump(2) + "\n";
}

std::string error_curve_csv(const EnsembleResult& result) {
    std::string out = "shot,median_eps2_g,median_eps2_omega,mean_eps2_g,mean_eps2_omega,n_failed\n";
    for (std::size_t s = 0; s < result.median_eps2_g.size(); ++s) {
        out += std::to_string(s + 1) + ',' + format_number(result.median_eps2_g[s]) + ',' +
               format_number(result.median_eps2_omega[s]) + ',' +
               format_number(result.mean_eps2_g[s]) + ',' +
               format_number(result.mean_eps2_omega[s]) + ',' +
               std::to_string(result.n_failed) + '\n';
    }
    return out;
}

std::string outlier_table_csv(const EnsembleResult& result) {
    std::string out = "threshold,shots,outlier_count,n_runs\n";
    for (const OutlierCell& c : result.outliers) {
        out += format_number(c.threshold) + ',' + std::to_string(c.shots) + ',' +
               std::to_string(c.count) + ',' + std::to_string(result.n_runs) + '\n';
    }
    return out;
}

std::string ensemble_json(const EnsembleResult& result, const std::string& config_echo) {
    nlohmann::ordered_json j;
    j["n_runs"] = result.n_runs;
    j["n_failed"] = result.n_failed;
    j["median_eps2_g"] = result.median_eps2_g;
    j["median_eps2_omega"] = result.median_eps2_omega;
    j["mean_eps2_g"] = result.mean_eps2_g;
    j["mean_eps2_omega"] = result.mean_eps2_omega;
    auto& outliers = j["outliers"] = nlohmann::ordered_json::array();
    for (const OutlierCell& c : result.outliers)
        outliers.push_back({{"threshold", c.threshold}, {"shots", c.shots}, {"count", c.count}});
    j["config"] = config_echo;
    return j.dump(2) + "\n";
}

std::string grid_csv(const SpectroscopyData& data, const GridSpec& grid) {
    std::string out = "omega_q,t,empirical_probability,m_r\n";
    for (std::size_t i = 0; i < data.frequency.size(); ++i) {
        const ControlSetting s = grid_setting(i, grid);
        out += format_number(s.omega_q) + ',' + format_number(s.t) + ',' +
               format_number(data.frequency[i]) + ',' + std::to_string(data.m_r) + '\n';
    }
    return out;
}

SpectroscopyData read_grid_csv(const std::string& content, const GridSpec& grid) {
    SpectroscopyData data;
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("grid CSV: empty input");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            throw std::invalid_argument("grid CSV: expected 4 columns, got line '" + line + "'");
        data.frequency.push_back(std::stod(fields[2]));
        data.m_r = static_cast<std::size_t>(std::stoul(fields[3]));
    }
    if (data.frequency.size() != grid.size())
        throw std::invalid_argument("grid CSV: row count does not match grid size");
    return data;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis,value,mean_shots,median_shots,n_capped,n_runs\n";
    for (const SweepRow& r : rows) {
        out += r.axis + ',' + format_number(r.value) + ',' +
               format_number(r.result.mean_shots) + ',' +
               format_number(r.result.median_shots) + ',' +
               std::to_string(r.result.n_capped) + ',' + std::to_string(r.result.n_runs) + '\n';
    }
    return out;
}

}  // namespace qest
