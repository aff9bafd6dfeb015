#pragma once

#include <string>
#include <vector>

#include "larmor/harness.hpp"

namespace larmor {

// CSV schemas (exact headers):
//   runs:       seed,filter,mse,failed,mean_params,mean_compute_ns,n_meas
//   trajectory: idx,time_s,tau_s,theta_rad,outcome,estimate_hz,truth_hz,n_params,compute_ns
//   signals:    step_index,time_s,f_hz

void export_runs_csv(const std::vector<RunSummary>& runs, const std::string& path);
void export_trajectory_csv(const RunRecord& record, const std::string& path);
void export_signal_csv(const GroundTruthSignal& sig, const std::string& path);
GroundTruthSignal import_signal_csv(const std::string& path);

/// Lossless JSON round-trip of a full run record (config, rows, summary).
void export_record_json(const RunRecord& record, const std::string& path);
RunRecord import_record_json(const std::string& path);
std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& json_text);

void export_compare_json(const CompareResult& result, const std::string& path);
void export_compare_csv(const CompareResult& result, const std::string& path);
void export_sweep_json(const std::vector<SweepPoint>& points, SweepAxis axis,
                       const std::string& path);
void export_sweep_csv(const std::vector<SweepPoint>& points, SweepAxis axis,
                      const std::string& path);

/// Plain-text key=value config file ('#' comments). Keys mirror the CLI
/// long-flag names and units; unknown keys throw.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Applies one key=value pair (the config-file vocabulary; CLI-boundary
/// units such as microseconds and MHz*sqrt(Hz)).
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace larmor
