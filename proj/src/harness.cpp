#include "larmor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace larmor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// ---------------------------------------------------------------------------
// Filter backends: one mutable wrapper per filter kind so the run loop (and
// its timing block) is shared.
// ---------------------------------------------------------------------------

class Backend {
 public:
  virtual ~Backend() = default;
  virtual void update(int outcome, const RamseySettings& s) = 0;
  virtual void predict(double delta_t) = 0;
  virtual bool uniform() const = 0;
  virtual double estimate() const = 0;
  virtual int params() const = 0;
  virtual double sigma_est() const = 0;
  virtual std::complex<double> fourier(double omega) const = 0;
};

class GaussianBackend final : public Backend {
 public:
  GaussianBackend(const FrequencyRange& range, const FilterConfig& fc)
      : state_(init_uniform(range, fc)) {}

  void update(int outcome, const RamseySettings& s) override {
    state_ = larmor::update(state_, outcome, s);
  }
  void predict(double delta_t) override { state_ = larmor::predict(state_, delta_t); }
  bool uniform() const override { return state_.uniform_flag; }
  double estimate() const override { return larmor::estimate(state_); }
  int params() const override { return parameter_count(state_); }
  double sigma_est() const override {
    return std::sqrt(mixture_moments(state_.posterior).variance);
  }
  std::complex<double> fourier(double omega) const override {
    return fourier_coefficient(state_.posterior, omega);
  }

 private:
  FilterState state_;
};

class GridBackend final : public Backend {
 public:
  GridBackend(const FrequencyRange& range, int m, double kappa)
      : dist_(init_grid(range, m)), kappa_(kappa) {}

  void update(int outcome, const RamseySettings& s) override {
    auto result = update_grid(std::move(dist_), outcome, s);
    dist_ = std::move(result.dist);
    if (result.degenerate) ++degenerate_updates_;
    uniform_ = false;
  }
  void predict(double delta_t) override {
    dist_ = predict_grid(std::move(dist_), kappa_, delta_t);
  }
  bool uniform() const override { return uniform_; }
  double estimate() const override { return estimate_grid(dist_); }
  int params() const override { return dist_.size(); }
  double sigma_est() const override { return std::sqrt(grid_moments(dist_).variance); }
  std::complex<double> fourier(double omega) const override {
    return grid_fourier(dist_, omega);
  }

 private:
  GridDistribution dist_;
  double kappa_ = 0.0;
  bool uniform_ = true;
  long degenerate_updates_ = 0;
};

std::unique_ptr<Backend> make_backend(const RunConfig& cfg) {
  if (cfg.filter_kind == FilterKind::kGaussian) {
    FilterConfig fc;
    fc.amplitude_threshold = cfg.amplitude_threshold;
    fc.kl_threshold = cfg.kl_threshold;
    fc.kappa = cfg.kappa;
    fc.component_cap = cfg.component_cap;
    return std::make_unique<GaussianBackend>(cfg.range(), fc);
  }
  return std::make_unique<GridBackend>(cfg.range(), cfg.effective_grid_points(), cfg.kappa);
}

// Sensing levels in execution order: exponent k and repetitions.
std::vector<std::pair<int, int>> sensing_levels(const ControllerConfig& cc) {
  const auto schedule = sensing_schedule(cc);
  std::vector<std::pair<int, int>> out;
  out.reserve(schedule.size());
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    const int reps = schedule[n].second;
    const int k = cc.direction == SensingDirection::kLongToShort
                      ? cc.num_sensing_times - 1 - static_cast<int>(n)
                      : static_cast<int>(n);
    out.emplace_back(k, reps);
  }
  return out;
}

}  // namespace

std::string to_string(FilterKind kind) {
  return kind == FilterKind::kGaussian ? "gaussian" : "grid";
}

FilterKind filter_kind_from_string(const std::string& s) {
  if (s == "gaussian") return FilterKind::kGaussian;
  if (s == "grid") return FilterKind::kGrid;
  throw std::invalid_argument("unknown filter kind: " + s);
}

int RunConfig::effective_grid_points() const {
  if (grid_points > 0) return grid_points;
  return 10 * (1 << controller.num_sensing_times);
}

double RunConfig::sensing_duration() const {
  double t = 0.0;
  for (const auto& [tau, reps] : sensing_schedule(controller)) {
    t += static_cast<double>(reps) * (tau + t_oh);
  }
  return t;
}

void RunConfig::validate() const {
  if (!(tau_min > 0.0)) throw std::invalid_argument("RunConfig: tau_min must be > 0");
  if (!(t_oh >= 0.0)) throw std::invalid_argument("RunConfig: t_oh must be >= 0");
  if (!(t2_star > 0.0)) throw std::invalid_argument("RunConfig: t2_star must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("RunConfig: kappa must be >= 0");
  if (total_time.has_value() == measurement_budget.has_value()) {
    throw std::invalid_argument("RunConfig: exactly one of total_time / measurement_budget");
  }
  if (total_time && !(*total_time > 0.0)) {
    throw std::invalid_argument("RunConfig: total_time must be > 0");
  }
  if (measurement_budget && *measurement_budget < 1) {
    throw std::invalid_argument("RunConfig: measurement_budget must be >= 1");
  }
  if (controller.tau_min != tau_min) {
    throw std::invalid_argument("RunConfig: controller.tau_min must equal tau_min");
  }
  if (effective_grid_points() < 2) throw std::invalid_argument("RunConfig: grid too small");
  if (!(fail_threshold > 0.0)) throw std::invalid_argument("RunConfig: fail_threshold must be > 0");
  controller.validate();
}

std::string config_hash(const RunConfig& cfg) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "filter=%s;tau_min=%.17g;t_oh=%.17g;t2=%.17g;kappa=%.17g;time=%.17g;budget=%ld;"
                "N=%d;G=%d;F=%d;fom=%.17g;dir=%d;ath=%.17g;klth=%.17g;cap=%d;M=%d;fail=%.17g;"
                "f0=%.17g",
                to_string(cfg.filter_kind).c_str(), cfg.tau_min, cfg.t_oh, cfg.t2_star, cfg.kappa,
                cfg.total_time.value_or(-1.0), cfg.measurement_budget.value_or(-1L),
                cfg.controller.num_sensing_times, cfg.controller.repetition_base,
                cfg.controller.repetition_increment, cfg.controller.fom_threshold,
                static_cast<int>(cfg.controller.direction), cfg.amplitude_threshold,
                cfg.kl_threshold, cfg.component_cap, cfg.effective_grid_points(),
                cfg.fail_threshold, cfg.f0.value_or(std::nan("")));
  std::uint64_t h = 14695981039346656037ULL;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*p));
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

GroundTruthSignal make_signal(const RunConfig& cfg) {
  cfg.validate();
  const double tau_max = cfg.controller.tau_max();
  const double step_max = tau_max + cfg.t_oh;
  double duration = cfg.sensing_duration() + 2.0 * step_max;
  if (cfg.total_time) {
    duration += *cfg.total_time + step_max;
  } else {
    duration += static_cast<double>(*cfg.measurement_budget) * step_max;
  }
  return generate_ground_truth(cfg.f0, cfg.kappa, cfg.tau_min, duration, cfg.range(), cfg.seed);
}

RunRecord run_tracking(const RunConfig& cfg, const GroundTruthSignal& signal) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;

  RunRecord record;
  record.config = cfg;

  auto backend = make_backend(cfg);
  Pcg32 rng(cfg.seed, cfg.filter_kind == FilterKind::kGaussian ? 1 : 2);
  ExperimentClock clock{0.0, cfg.t_oh};
  const double signal_end = signal.total_time();
  bool truncated = false;

  const auto levels = sensing_levels(cfg.controller);
  long idx = 0;

  const auto out_of_budget = [&]() {
    return cfg.measurement_budget && idx >= *cfg.measurement_budget;
  };

  // One measurement: the timed section covers only what a real-time
  // controller must compute between Ramsey shots (choose tau / choose theta
  // before, Bayes update / reduction / prediction after).
  const auto do_measurement = [&](int k, bool tracking) {
    const double tau = std::ldexp(cfg.tau_min, k);
    if (clock.t + tau + cfg.t_oh > signal_end) {
      truncated = true;
      return false;
    }

    const auto t0 = Clock::now();
    double theta = 0.0;
    if (!backend->uniform()) {
      const double omega = kTwoPi * 2.0 * static_cast<double>(1L << k) * cfg.tau_min;
      theta = phase_from_coefficient(backend->fourier(omega));
    }
    const auto t1 = Clock::now();

    RamseySettings settings{theta, tau, cfg.t2_star, 0};
    const double f_true = true_frequency_at(signal, clock.t);
    const int outcome = sample_measurement(f_true, settings, rng);

    const auto t2 = Clock::now();
    backend->update(outcome, settings);
    if (tracking) backend->predict(tau + cfg.t_oh);
    const auto t3 = Clock::now();

    clock.advance(tau);

    MeasurementRow row;
    row.idx = idx++;
    row.time_s = clock.t;
    row.tau_s = tau;
    row.theta_rad = theta;
    row.outcome = outcome;
    row.estimate_hz = backend->estimate();
    row.truth_hz = true_frequency_at(signal, std::min(clock.t, signal_end));
    row.n_params = backend->params();
    row.compute_ns = std::chrono::duration_cast<std::chrono::nanoseconds>((t1 - t0) + (t3 - t2)).count();
    row.tracking = tracking;
    record.rows.push_back(row);
    return true;
  };

  // Sensing phase: fixed tau schedule, adaptive theta per shot, no prediction.
  int last_k = levels.empty() ? 0 : levels.front().first;
  for (const auto& [k, reps] : levels) {
    last_k = k;
    for (int r = 0; r < reps && !out_of_budget() && !truncated; ++r) {
      if (!do_measurement(k, false)) break;
    }
    if (out_of_budget() || truncated) break;
  }
  record.summary.n_sensing = idx;

  // Tracking phase: adaptive tau and theta, update + predict.
  SensingTimeState ts{last_k};
  double t_track = 0.0;
  while (!truncated) {
    if (cfg.measurement_budget) {
      if (idx >= *cfg.measurement_budget) break;
    } else if (t_track >= *cfg.total_time) {
      break;
    }
    const auto f0c = Clock::now();
    const double tau_cur = std::ldexp(cfg.tau_min, ts.k);
    const double fom = fom_from_sigma(backend->sigma_est(), tau_cur);
    ts = choose_sensing_time(ts, fom, cfg.controller);
    const auto f1c = Clock::now();
    const long fom_timed_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(f1c - f0c).count();

    if (!do_measurement(ts.k, true)) break;
    record.rows.back().compute_ns += fom_timed_ns;
    t_track += record.rows.back().tau_s + cfg.t_oh;
  }

  // Summary.
  auto& s = record.summary;
  s.seed = cfg.seed;
  s.filter = to_string(cfg.filter_kind);
  s.truncated = truncated;
  s.n_meas = static_cast<long>(record.rows.size());
  s.config_hash = config_hash(cfg);
  double params_acc = 0.0, compute_acc = 0.0;
  std::vector<double> tracking_params;
  for (const auto& row : record.rows) {
    params_acc += row.n_params;
    compute_acc += static_cast<double>(row.compute_ns);
    if (row.tracking) tracking_params.push_back(row.n_params);
  }
  if (!record.rows.empty()) {
    s.mean_params = params_acc / static_cast<double>(record.rows.size());
    s.mean_compute_ns = compute_acc / static_cast<double>(record.rows.size());
  }
  s.tracking_median_params = median_of(std::move(tracking_params));
  s.mse = mse(record);
  s.failed = s.mse > cfg.fail_threshold;
  return record;
}

double mse(const RunRecord& record) {
  double num = 0.0, den = 0.0;
  for (const auto& row : record.rows) {
    if (!row.tracking) continue;
    const double dt = row.tau_s + record.config.t_oh;
    const double err_mhz = (row.truth_hz - row.estimate_hz) * 1e-6;
    num += dt * err_mhz * err_mhz;
    den += dt;
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

double fail_rate(const std::vector<RunSummary>& summaries, double threshold) {
  if (summaries.empty()) throw std::invalid_argument("fail_rate: empty input");
  long failed = 0;
  for (const auto& s : summaries) {
    if (s.mse > threshold) ++failed;
  }
  return static_cast<double>(failed) / static_cast<double>(summaries.size());
}

CompareResult direct_compare(const RunConfig& gaussian_cfg, const RunConfig& grid_cfg,
                             int n_runs, std::uint64_t seed0) {
  // The two slots are normally (gaussian, grid), but any pair with shared
  // physics is allowed (self-comparison is a useful sanity check); result
  // fields named gaussian_/grid_ refer to the first/second slot.
  const bool shared = gaussian_cfg.tau_min == grid_cfg.tau_min &&
                      gaussian_cfg.kappa == grid_cfg.kappa && gaussian_cfg.t_oh == grid_cfg.t_oh &&
                      gaussian_cfg.t2_star == grid_cfg.t2_star &&
                      gaussian_cfg.total_time == grid_cfg.total_time &&
                      gaussian_cfg.measurement_budget == grid_cfg.measurement_budget;
  if (!shared) {
    throw std::invalid_argument("direct_compare: configs disagree on shared physics");
  }
  if (n_runs < 1) throw std::invalid_argument("direct_compare: n_runs must be >= 1");

  CompareResult result;
  result.t2_star = gaussian_cfg.t2_star;
  result.t_oh = gaussian_cfg.t_oh;
  result.kappa = gaussian_cfg.kappa;
  result.n_runs = n_runs;
  result.grid_params = grid_cfg.effective_grid_points();

  std::vector<RunSummary> gauss_runs, grid_runs;
  double gauss_ns = 0.0, grid_ns = 0.0;
  long gauss_rows = 0, grid_rows = 0;
  std::vector<double> gauss_tracking_params;

  // Per-run warm-up exclusion: the first 100 tracking rows (or half of them
  // for short runs) stay out of the timing pool.
  const auto pool_rows = [](const RunRecord& rec, double* ns_acc, long* row_acc,
                            std::vector<double>* params_acc) {
    long total = 0;
    for (const auto& row : rec.rows) {
      if (row.tracking) ++total;
    }
    const long warmup = std::min<long>(100, total / 2);
    long seen = 0;
    for (const auto& row : rec.rows) {
      if (!row.tracking) continue;
      const bool timed = ++seen > warmup;
      if (timed) {
        *ns_acc += static_cast<double>(row.compute_ns);
        ++*row_acc;
      }
      if (params_acc) params_acc->push_back(row.n_params);
    }
  };

  for (int i = 0; i < n_runs; ++i) {
    RunConfig cg = gaussian_cfg;
    RunConfig cr = grid_cfg;
    cg.seed = cr.seed = seed0 + static_cast<std::uint64_t>(i);
    const GroundTruthSignal signal = make_signal(cg);

    const RunRecord rec_g = run_tracking(cg, signal);
    const RunRecord rec_r = run_tracking(cr, signal);
    pool_rows(rec_g, &gauss_ns, &gauss_rows, &gauss_tracking_params);
    pool_rows(rec_r, &grid_ns, &grid_rows, nullptr);
    gauss_runs.push_back(rec_g.summary);
    grid_runs.push_back(rec_r.summary);
  }

  const double th = gaussian_cfg.fail_threshold;
  result.gaussian_fail_rate = fail_rate(gauss_runs, th);
  result.grid_fail_rate = fail_rate(grid_runs, th);
  auto mean_ok = [th](const std::vector<RunSummary>& rs) {
    double acc = 0.0;
    long n = 0;
    for (const auto& r : rs) {
      if (r.mse <= th) {
        acc += r.mse;
        ++n;
      }
    }
    return n > 0 ? acc / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  };
  result.gaussian_mean_mse_ok = mean_ok(gauss_runs);
  result.grid_mean_mse_ok = mean_ok(grid_runs);
  result.gaussian_mean_compute_ns = gauss_rows > 0 ? gauss_ns / static_cast<double>(gauss_rows) : 0.0;
  result.grid_mean_compute_ns = grid_rows > 0 ? grid_ns / static_cast<double>(grid_rows) : 0.0;
  result.speed_increase = result.gaussian_mean_compute_ns > 0.0
                              ? result.grid_mean_compute_ns / result.gaussian_mean_compute_ns
                              : 0.0;
  result.gaussian_tracking_median_params = median_of(std::move(gauss_tracking_params));
  result.runs = std::move(gauss_runs);
  result.runs.insert(result.runs.end(), grid_runs.begin(), grid_runs.end());
  return result;
}

std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int runs_per_point,
                              std::uint64_t seed0) {
  if (values.empty()) throw std::invalid_argument("sweep: values must be nonempty");
  if (runs_per_point < 1) throw std::invalid_argument("sweep: runs_per_point must be >= 1");

  std::vector<SweepPoint> out;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    RunConfig cfg = base;
    if (axis == SweepAxis::kKappa) {
      cfg.kappa = values[vi];
    } else {
      cfg.t_oh = values[vi];
    }

    struct PairResult {
      RunSummary gauss;
      RunSummary grid;
    };
    std::vector<PairResult> results(static_cast<std::size_t>(runs_per_point));

    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= runs_per_point) break;
        // Statistical comparison: every tracking run gets its own signal,
        // so the two filters see different trajectories here (unlike
        // direct_compare, which replays one signal for both).
        RunConfig cg = cfg;
        cg.filter_kind = FilterKind::kGaussian;
        cg.seed = seed0 + static_cast<std::uint64_t>(vi) * 100000u + static_cast<std::uint64_t>(i);
        RunConfig cr = cfg;
        cr.filter_kind = FilterKind::kGrid;
        cr.seed = cg.seed + 50000u;
        results[static_cast<std::size_t>(i)].gauss = run_tracking(cg, make_signal(cg)).summary;
        results[static_cast<std::size_t>(i)].grid = run_tracking(cr, make_signal(cr)).summary;
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SweepPoint point;
    point.value = values[vi];
    point.runs = runs_per_point;
    double gm = 0.0, rm = 0.0, gp = 0.0, rp = 0.0;
    long gf = 0, rf = 0;
    for (const auto& pr : results) {
      gm += pr.gauss.mse;
      rm += pr.grid.mse;
      gp += pr.gauss.mean_params;
      rp += pr.grid.mean_params;
      if (pr.gauss.mse > cfg.fail_threshold) ++gf;
      if (pr.grid.mse > cfg.fail_threshold) ++rf;
    }
    const double n = static_cast<double>(runs_per_point);
    point.gaussian_mean_mse = gm / n;
    point.grid_mean_mse = rm / n;
    double gsq = 0.0, rsq = 0.0;
    for (const auto& pr : results) {
      gsq += (pr.gauss.mse - point.gaussian_mean_mse) * (pr.gauss.mse - point.gaussian_mean_mse);
      rsq += (pr.grid.mse - point.grid_mean_mse) * (pr.grid.mse - point.grid_mean_mse);
    }
    point.gaussian_mse_sd = runs_per_point > 1 ? std::sqrt(gsq / (n - 1.0)) : 0.0;
    point.grid_mse_sd = runs_per_point > 1 ? std::sqrt(rsq / (n - 1.0)) : 0.0;
    point.gaussian_mean_params = gp / n;
    point.grid_mean_params = rp / n;
    point.gaussian_fail_rate = static_cast<double>(gf) / n;
    point.grid_fail_rate = static_cast<double>(rf) / n;
    out.push_back(point);
  }
  return out;
}

}  // namespace larmor
