#include "larmor/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace larmor {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read: " + path);
  return in;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["filter"] = to_string(c.filter_kind);
  j["tau_min_s"] = c.tau_min;
  j["t_oh_s"] = c.t_oh;
  j["t2_star_s"] = std::isinf(c.t2_star) ? json("inf") : json(c.t2_star);
  j["kappa_hz_per_sqrt_s"] = c.kappa;
  if (c.total_time) j["total_time_s"] = *c.total_time;
  if (c.measurement_budget) j["measurement_budget"] = *c.measurement_budget;
  j["n_sensing_times"] = c.controller.num_sensing_times;
  j["repetition_base"] = c.controller.repetition_base;
  j["repetition_increment"] = c.controller.repetition_increment;
  j["fom_threshold"] = c.controller.fom_threshold;
  j["sensing_direction"] =
      c.controller.direction == SensingDirection::kLongToShort ? "long-to-short" : "short-to-long";
  j["amplitude_threshold"] = c.amplitude_threshold;
  j["kl_threshold"] = c.kl_threshold;
  j["component_cap"] = c.component_cap;
  j["grid_points"] = c.effective_grid_points();
  j["seed"] = c.seed;
  j["fail_threshold"] = c.fail_threshold;
  if (c.f0) j["f0_hz"] = *c.f0;
  j["mse_definition"] =
      "sum(dt_n * ((truth-estimate)/1e6)^2) / sum(dt_n) over tracking-phase rows, dt_n = tau_n + t_oh";
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.filter_kind = filter_kind_from_string(j.at("filter").get<std::string>());
  c.tau_min = j.at("tau_min_s").get<double>();
  c.t_oh = j.at("t_oh_s").get<double>();
  c.t2_star = j.at("t2_star_s").is_string() ? std::numeric_limits<double>::infinity()
                                            : j.at("t2_star_s").get<double>();
  c.kappa = j.at("kappa_hz_per_sqrt_s").get<double>();
  c.total_time.reset();
  c.measurement_budget.reset();
  if (j.contains("total_time_s")) c.total_time = j.at("total_time_s").get<double>();
  if (j.contains("measurement_budget")) {
    c.measurement_budget = j.at("measurement_budget").get<long>();
  }
  c.controller.tau_min = c.tau_min;
  c.controller.num_sensing_times = j.at("n_sensing_times").get<int>();
  c.controller.repetition_base = j.at("repetition_base").get<int>();
  c.controller.repetition_increment = j.at("repetition_increment").get<int>();
  c.controller.fom_threshold = j.at("fom_threshold").get<double>();
  c.controller.direction = j.at("sensing_direction").get<std::string>() == "short-to-long"
                               ? SensingDirection::kShortToLong
                               : SensingDirection::kLongToShort;
  c.amplitude_threshold = j.at("amplitude_threshold").get<double>();
  c.kl_threshold = j.at("kl_threshold").get<double>();
  c.component_cap = j.at("component_cap").get<int>();
  c.grid_points = j.at("grid_points").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.fail_threshold = j.at("fail_threshold").get<double>();
  if (j.contains("f0_hz")) c.f0 = j.at("f0_hz").get<double>();
  return c;
}

json summary_to_json(const RunSummary& s) {
  return json{{"seed", s.seed},
              {"filter", s.filter},
              {"mse", s.mse},
              {"failed", s.failed},
              {"mean_params", s.mean_params},
              {"tracking_median_params", s.tracking_median_params},
              {"mean_compute_ns", s.mean_compute_ns},
              {"n_meas", s.n_meas},
              {"n_sensing", s.n_sensing},
              {"truncated", s.truncated},
              {"config_hash", s.config_hash}};
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.filter = j.at("filter").get<std::string>();
  s.mse = j.at("mse").get<double>();
  s.failed = j.at("failed").get<bool>();
  s.mean_params = j.at("mean_params").get<double>();
  s.tracking_median_params = j.at("tracking_median_params").get<double>();
  s.mean_compute_ns = j.at("mean_compute_ns").get<double>();
  s.n_meas = j.at("n_meas").get<long>();
  s.n_sensing = j.at("n_sensing").get<long>();
  s.truncated = j.at("truncated").get<bool>();
  s.config_hash = j.at("config_hash").get<std::string>();
  return s;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": " + s);
  }
}

}  // namespace

void export_runs_csv(const std::vector<RunSummary>& runs, const std::string& path) {
  auto out = open_out(path);
  out << "seed,filter,mse,failed,mean_params,mean_compute_ns,n_meas\n";
  for (const auto& r : runs) {
    out << r.seed << ',' << r.filter << ',' << r.mse << ',' << (r.failed ? 1 : 0) << ','
        << r.mean_params << ',' << r.mean_compute_ns << ',' << r.n_meas << '\n';
  }
}

void export_trajectory_csv(const RunRecord& record, const std::string& path) {
  auto out = open_out(path);
  out << "idx,time_s,tau_s,theta_rad,outcome,estimate_hz,truth_hz,n_params,compute_ns\n";
  for (const auto& r : record.rows) {
    out << r.idx << ',' << r.time_s << ',' << r.tau_s << ',' << r.theta_rad << ',' << r.outcome
        << ',' << r.estimate_hz << ',' << r.truth_hz << ',' << r.n_params << ',' << r.compute_ns
        << '\n';
  }
}

void export_signal_csv(const GroundTruthSignal& sig, const std::string& path) {
  auto out = open_out(path);
  out << "step_index,time_s,f_hz\n";
  for (std::size_t i = 0; i < sig.values.size(); ++i) {
    out << i << ',' << (static_cast<double>(i) * sig.step) << ',' << sig.values[i] << '\n';
  }
}

GroundTruthSignal import_signal_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "step_index,time_s,f_hz") {
    throw std::runtime_error("signal csv: bad header in " + path);
  }
  GroundTruthSignal sig;
  double prev_t = 0.0;
  bool have_step = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string idx_s, t_s, f_s;
    if (!std::getline(ss, idx_s, ',') || !std::getline(ss, t_s, ',') || !std::getline(ss, f_s)) {
      throw std::runtime_error("signal csv: bad row: " + line);
    }
    const double t = std::stod(t_s);
    sig.values.push_back(std::stod(f_s));
    if (sig.values.size() == 2) {
      sig.step = t - prev_t;
      have_step = true;
    }
    prev_t = t;
  }
  if (sig.values.empty() || !have_step) throw std::runtime_error("signal csv: too few rows");
  sig.f0 = sig.values.front();
  double lo = sig.values.front(), hi = sig.values.front();
  for (double v : sig.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  sig.range = {lo, hi > lo ? hi : lo + 1.0};
  return sig;
}

std::string record_to_json(const RunRecord& record) {
  json j;
  j["config"] = config_to_json(record.config);
  j["summary"] = summary_to_json(record.summary);
  json rows = json::array();
  for (const auto& r : record.rows) {
    rows.push_back(json{{"idx", r.idx},
                        {"time_s", r.time_s},
                        {"tau_s", r.tau_s},
                        {"theta_rad", r.theta_rad},
                        {"outcome", r.outcome},
                        {"estimate_hz", r.estimate_hz},
                        {"truth_hz", r.truth_hz},
                        {"n_params", r.n_params},
                        {"compute_ns", r.compute_ns},
                        {"tracking", r.tracking}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

RunRecord record_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  RunRecord rec;
  rec.config = config_from_json(j.at("config"));
  rec.summary = summary_from_json(j.at("summary"));
  for (const auto& rj : j.at("rows")) {
    MeasurementRow r;
    r.idx = rj.at("idx").get<long>();
    r.time_s = rj.at("time_s").get<double>();
    r.tau_s = rj.at("tau_s").get<double>();
    r.theta_rad = rj.at("theta_rad").get<double>();
    r.outcome = rj.at("outcome").get<int>();
    r.estimate_hz = rj.at("estimate_hz").get<double>();
    r.truth_hz = rj.at("truth_hz").get<double>();
    r.n_params = rj.at("n_params").get<int>();
    r.compute_ns = rj.at("compute_ns").get<std::int64_t>();
    r.tracking = rj.at("tracking").get<bool>();
    rec.rows.push_back(r);
  }
  return rec;
}

void export_record_json(const RunRecord& record, const std::string& path) {
  auto out = open_out(path);
  out << record_to_json(record) << '\n';
}

RunRecord import_record_json(const std::string& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return record_from_json(ss.str());
}

namespace {

json compare_to_json(const CompareResult& r) {
  json j;
  j["t2_star_us"] = r.t2_star * 1e6;
  j["overhead_us"] = r.t_oh * 1e6;
  j["kappa_mhz_sqrthz"] = r.kappa * 1e-6;
  j["runs"] = r.n_runs;
  j["grid_fail_rate"] = r.grid_fail_rate;
  j["gaussian_fail_rate"] = r.gaussian_fail_rate;
  j["speed_increase"] = r.speed_increase;
  j["grid_mean_mse_ok"] = r.grid_mean_mse_ok;
  j["gaussian_mean_mse_ok"] = r.gaussian_mean_mse_ok;
  j["grid_mean_compute_ns"] = r.grid_mean_compute_ns;
  j["gaussian_mean_compute_ns"] = r.gaussian_mean_compute_ns;
  j["gaussian_tracking_median_params"] = r.gaussian_tracking_median_params;
  j["grid_params"] = r.grid_params;
  json runs = json::array();
  for (const auto& s : r.runs) runs.push_back(summary_to_json(s));
  j["per_run"] = std::move(runs);
  return j;
}

const char* axis_name(SweepAxis axis) {
  return axis == SweepAxis::kKappa ? "kappa" : "overhead";
}

double axis_display_value(SweepAxis axis, double si_value) {
  return axis == SweepAxis::kKappa ? si_value * 1e-6 : si_value * 1e6;
}

}  // namespace

void export_compare_json(const CompareResult& result, const std::string& path) {
  auto out = open_out(path);
  out << compare_to_json(result).dump(2) << '\n';
}

void export_compare_csv(const CompareResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "t2star_us,overhead_us,kappa_mhz_sqrthz,runs,grid_fail_rate,gaussian_fail_rate,"
         "speed_increase,grid_mean_mse_ok,gaussian_mean_mse_ok,grid_mean_compute_ns,"
         "gaussian_mean_compute_ns,gaussian_tracking_median_params,grid_params\n";
  out << result.t2_star * 1e6 << ',' << result.t_oh * 1e6 << ',' << result.kappa * 1e-6 << ','
      << result.n_runs << ',' << result.grid_fail_rate << ',' << result.gaussian_fail_rate << ','
      << result.speed_increase << ',' << result.grid_mean_mse_ok << ','
      << result.gaussian_mean_mse_ok << ',' << result.grid_mean_compute_ns << ','
      << result.gaussian_mean_compute_ns << ',' << result.gaussian_tracking_median_params << ','
      << result.grid_params << '\n';
}

void export_sweep_json(const std::vector<SweepPoint>& points, SweepAxis axis,
                       const std::string& path) {
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back(json{{"axis", axis_name(axis)},
                       {"value", axis_display_value(axis, p.value)},
                       {"gaussian_mean_mse", p.gaussian_mean_mse},
                       {"grid_mean_mse", p.grid_mean_mse},
                       {"gaussian_mse_sd", p.gaussian_mse_sd},
                       {"grid_mse_sd", p.grid_mse_sd},
                       {"gaussian_fail_rate", p.gaussian_fail_rate},
                       {"grid_fail_rate", p.grid_fail_rate},
                       {"gaussian_mean_params", p.gaussian_mean_params},
                       {"grid_mean_params", p.grid_mean_params},
                       {"runs", p.runs}});
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

void export_sweep_csv(const std::vector<SweepPoint>& points, SweepAxis axis,
                      const std::string& path) {
  auto out = open_out(path);
  out << "axis,value,gaussian_mean_mse,grid_mean_mse,gaussian_mse_sd,grid_mse_sd,"
         "gaussian_fail_rate,grid_fail_rate,gaussian_mean_params,grid_mean_params,runs\n";
  for (const auto& p : points) {
    out << axis_name(axis) << ',' << axis_display_value(axis, p.value) << ','
        << p.gaussian_mean_mse << ',' << p.grid_mean_mse << ',' << p.gaussian_mse_sd << ','
        << p.grid_mse_sd << ',' << p.gaussian_fail_rate << ',' << p.grid_fail_rate << ','
        << p.gaussian_mean_params << ',' << p.grid_mean_params << ',' << p.runs << '\n';
  }
}

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "filter") {
    cfg.filter_kind = filter_kind_from_string(value);
  } else if (key == "tau-min-ns") {
    cfg.tau_min = parse_double(value, key) * 1e-9;
    cfg.controller.tau_min = cfg.tau_min;
  } else if (key == "overhead") {  // microseconds
    cfg.t_oh = parse_double(value, key) * 1e-6;
  } else if (key == "t2star") {  // microseconds or "inf"
    cfg.t2_star = (value == "inf") ? std::numeric_limits<double>::infinity()
                                   : parse_double(value, key) * 1e-6;
  } else if (key == "kappa") {  // MHz Hz^(1/2)
    cfg.kappa = parse_double(value, key) * 1e6;
  } else if (key == "time-ms") {
    cfg.total_time = parse_double(value, key) * 1e-3;
    cfg.measurement_budget.reset();
  } else if (key == "budget") {
    cfg.measurement_budget = static_cast<long>(parse_double(value, key));
    cfg.total_time.reset();
  } else if (key == "n-times") {
    cfg.controller.num_sensing_times = static_cast<int>(parse_double(value, key));
  } else if (key == "g-reps") {
    cfg.controller.repetition_base = static_cast<int>(parse_double(value, key));
  } else if (key == "f-reps") {
    cfg.controller.repetition_increment = static_cast<int>(parse_double(value, key));
  } else if (key == "fom-threshold") {
    cfg.controller.fom_threshold = parse_double(value, key);
  } else if (key == "direction") {
    if (value == "long-to-short") {
      cfg.controller.direction = SensingDirection::kLongToShort;
    } else if (value == "short-to-long") {
      cfg.controller.direction = SensingDirection::kShortToLong;
    } else {
      throw std::invalid_argument("config: bad direction: " + value);
    }
  } else if (key == "amplitude-threshold") {
    cfg.amplitude_threshold = parse_double(value, key);
  } else if (key == "kl-threshold") {
    cfg.kl_threshold = parse_double(value, key);
  } else if (key == "grid-points") {
    cfg.grid_points = static_cast<int>(parse_double(value, key));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "fail-threshold") {
    cfg.fail_threshold = parse_double(value, key);
  } else if (key == "f0-mhz") {
    cfg.f0 = parse_double(value, key) * 1e6;
  } else if (key == "component-cap") {
    cfg.component_cap = static_cast<int>(parse_double(value, key));
  } else {
    throw std::invalid_argument("config: unknown key: " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  auto in = open_in(path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
    }
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    apply_config_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace larmor
