#include "larmor/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace larmor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPhaseMagnitudeFloor = 1e-12;
}  // namespace

double ControllerConfig::tau_max() const {
  return std::ldexp(tau_min, num_sensing_times - 1);  // 2^(N-1) * tau_min
}

void ControllerConfig::validate() const {
  if (!(tau_min > 0.0)) throw std::invalid_argument("ControllerConfig: tau_min must be > 0");
  if (num_sensing_times < 1) throw std::invalid_argument("ControllerConfig: N must be >= 1");
  if (repetition_base < 1) throw std::invalid_argument("ControllerConfig: G must be >= 1");
  if (repetition_increment < 0) throw std::invalid_argument("ControllerConfig: F must be >= 0");
  if (!(fom_threshold > 0.0)) {
    throw std::invalid_argument("ControllerConfig: fom_threshold must be > 0");
  }
}

std::vector<std::pair<double, int>> sensing_schedule(const ControllerConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, int>> out;
  out.reserve(static_cast<std::size_t>(cfg.num_sensing_times));
  for (int n = 0; n < cfg.num_sensing_times; ++n) {
    const double tau = std::ldexp(cfg.tau_min, n);
    const int reps = std::max(1, cfg.repetition_base + cfg.repetition_increment * (n - 1));
    out.emplace_back(tau, reps);
  }
  return out;
}

double phase_from_coefficient(std::complex<double> p) {
  if (std::abs(p) < kPhaseMagnitudeFloor) return 0.0;
  // arg(conj(p))/2 puts a fringe extremum on the prior's circular mean; the
  // mod-pi ambiguity of the half-angle only swaps the outcome labels.
  double theta = 0.5 * std::arg(std::conj(p));
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  return theta;
}

double choose_phase(const GaussianMixture& prior, long t_n, double tau_min) {
  if (prior.empty()) throw std::invalid_argument("choose_phase: empty prior");
  const double omega = kTwoPi * 2.0 * static_cast<double>(t_n) * tau_min;
  return phase_from_coefficient(fourier_coefficient(prior, omega));
}

double fom_from_sigma(double sigma_est, double tau_n) { return sigma_est * kTwoPi * tau_n; }

double figure_of_merit(const GaussianMixture& posterior, double tau_n) {
  return fom_from_sigma(std::sqrt(mixture_moments(posterior).variance), tau_n);
}

SensingTimeState choose_sensing_time(SensingTimeState state, double fom,
                                     const ControllerConfig& cfg) {
  const int step = fom > cfg.fom_threshold ? -1 : +1;
  SensingTimeState out;
  out.k = std::clamp(state.k + step, 0, cfg.num_sensing_times - 1);
  return out;
}

}  // namespace larmor
