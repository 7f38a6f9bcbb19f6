#pragma once

#include <string>

#include "qest/baseline.hpp"
#include "qest/ensemble.hpp"
#include "qest/session.hpp"

namespace qest {

// Locale-independent full-precision number formatting used by every writer.
std::string format_number(double v);

void write_text_file(const std::string& path, const std::string& content);

// Per-shot CSV: shot,omega_q,t,outcome,mean_g,std_g,mean_omega,std_omega
std::string shot_csv(const RunRecord& record);

// RunRecord as JSON, with the resolved configuration embedded.
std::string run_record_json(const RunRecord& record, const std::string& config_echo);

// Error curve CSV: shot,median_eps2_g,median_eps2_omega,mean_eps2_g,mean_eps2_omega,n_failed
std::string error_curve_csv(const EnsembleResult& result);

// Outlier table CSV: threshold,shots,outlier_count,n_runs
std::string outlier_table_csv(const EnsembleResult& result);

std::string ensemble_json(const EnsembleResult& result, const std::string& config_echo);

// Spectroscopy grid CSV: omega_q,t,empirical_probability,m_r
std::string grid_csv(const SpectroscopyData& data, const GridSpec& grid);

// Reads a grid CSV produced by grid_csv (or externally, same columns).
SpectroscopyData read_grid_csv(const std::string& content, const GridSpec& grid);

// Sweep CSV: axis,value,mean_shots,median_shots,n_capped,n_runs
struct SweepRow {
    std::string axis;
    double value;
    ShotsToThreshold result;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qest
