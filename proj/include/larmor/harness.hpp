#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "larmor/controllers.hpp"
#include "larmor/gaussian_filter.hpp"
#include "larmor/grid_filter.hpp"
#include "larmor/simkit.hpp"

namespace larmor {

enum class FilterKind { kGaussian, kGrid };

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& s);

/// Full configuration of one tracking run. All quantities SI; unit
/// conversion (MHz, microseconds) happens at the CLI boundary only.
struct RunConfig {
  FilterKind filter_kind = FilterKind::kGaussian;
  double tau_min = 10e-9;                     // seconds
  double t_oh = 10e-6;                        // seconds
  double t2_star = 100e-6;                    // seconds; +inf allowed
  double kappa = 1e7;                         // Hz / sqrt(s)
  std::optional<double> total_time = 5e-3;    // tracking-phase duration, seconds
  std::optional<long> measurement_budget;     // total rows incl. sensing
  ControllerConfig controller;                // N, G, F, fom_threshold, direction
  double amplitude_threshold = 0.04;          // A_th
  double kl_threshold = 0.001;                // KL_th
  int component_cap = 20;                     // observational
  int grid_points = 0;                        // 0 -> default 10 * 2^N
  std::uint64_t seed = 1;
  double fail_threshold = 0.15;               // MSE, MHz^2 time-normalized
  std::optional<double> f0;                   // Hz; unset -> drawn from seed

  FrequencyRange range() const { return {0.0, 1.0 / tau_min}; }
  int effective_grid_points() const;
  double sensing_duration() const;  // total time of the fixed schedule
  void validate() const;            // throws std::invalid_argument
};

/// One measurement row. time_s is the clock after the measurement's
/// tau + t_oh interval; the estimate is the post-update (and, in the
/// tracking phase, post-prediction) point estimate; compute_ns covers only
/// the inter-measurement pipeline (update, reduce, predict, choose tau,
/// choose theta).
struct MeasurementRow {
  long idx = 0;
  double time_s = 0.0;
  double tau_s = 0.0;
  double theta_rad = 0.0;
  int outcome = 0;
  double estimate_hz = 0.0;
  double truth_hz = 0.0;
  int n_params = 0;
  std::int64_t compute_ns = 0;
  bool tracking = false;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::string filter;
  double mse = 0.0;  // tracking-phase, MHz^2
  bool failed = false;
  double mean_params = 0.0;            // over all rows, sensing included
  double tracking_median_params = 0.0;
  double mean_compute_ns = 0.0;        // over all rows
  long n_meas = 0;
  long n_sensing = 0;
  bool truncated = false;
  std::string config_hash;
};

struct RunRecord {
  RunConfig config;
  std::vector<MeasurementRow> rows;
  RunSummary summary;
};

/// FNV-1a hash of the canonical config serialization (seed excluded).
std::string config_hash(const RunConfig& cfg);

/// Executes the sensing phase (fixed schedule, adaptive theta per
/// measurement) followed by the adaptive tracking phase until the budget is
/// exhausted. The ground-truth signal must cover the run; exhaustion
/// truncates the record and flags it.
RunRecord run_tracking(const RunConfig& cfg, const GroundTruthSignal& signal);

/// Generates a signal long enough for cfg from cfg.seed (stream 0).
GroundTruthSignal make_signal(const RunConfig& cfg);

/// Time-normalized tracking-phase mean squared error in MHz^2:
/// sum(dt_n * err_n^2) / sum(dt_n) with dt_n = tau_n + t_oh.
double mse(const RunRecord& record);

/// Fraction of records with MSE above the threshold.
double fail_rate(const std::vector<RunSummary>& summaries, double threshold);

struct CompareResult {
  double t2_star = 0.0;
  double t_oh = 0.0;
  double kappa = 0.0;
  int n_runs = 0;
  double grid_fail_rate = 0.0;
  double gaussian_fail_rate = 0.0;
  double speed_increase = 0.0;       // mean grid / mean gaussian compute per measurement
  double grid_mean_mse_ok = 0.0;     // over non-failed runs
  double gaussian_mean_mse_ok = 0.0;
  double grid_mean_compute_ns = 0.0;
  double gaussian_mean_compute_ns = 0.0;
  double gaussian_tracking_median_params = 0.0;  // pooled tracking rows
  double grid_params = 0.0;
  std::vector<RunSummary> runs;
};

/// Table-1 style direct comparison: for each seed both filters replay the
/// identical ground-truth signal. Runs execute sequentially on one thread
/// (per-measurement times feed the speed ratio); the ratio pools tracking
/// rows, skipping the first 100 timed rows of each run as warm-up.
/// Throws std::invalid_argument when the two configs disagree on shared
/// physics (tau_min, kappa, t_oh, T2*, budget).
CompareResult direct_compare(const RunConfig& gaussian_cfg, const RunConfig& grid_cfg,
                             int n_runs, std::uint64_t seed0);

enum class SweepAxis { kKappa, kOverhead };

struct SweepPoint {
  double value = 0.0;  // SI value of the swept variable
  double gaussian_mean_mse = 0.0;  // over all runs, failed included
  double grid_mean_mse = 0.0;
  double gaussian_mse_sd = 0.0;  // sample stddev of per-run MSE
  double grid_mse_sd = 0.0;
  double gaussian_fail_rate = 0.0;
  double grid_fail_rate = 0.0;
  double gaussian_mean_params = 0.0;
  double grid_mean_params = 0.0;
  int runs = 0;
};

/// Statistical comparison: fresh signals per run (each run its own seed),
/// both filters per point. Runs fan out across a small worker pool;
/// aggregation is ordered by seed, so results are thread-count independent.
std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int runs_per_point,
                              std::uint64_t seed0);

}  // namespace larmor
