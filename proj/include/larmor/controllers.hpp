#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "larmor/mixture.hpp"

namespace larmor {

/// Order in which the fixed sensing schedule is executed.
enum class SensingDirection {
  kLongToShort,  // start at tau_max, finish at tau_min (default)
  kShortToLong,  // literal Algorithm-1 order
};

struct ControllerConfig {
  double tau_min = 10e-9;      // seconds
  int num_sensing_times = 7;   // N; sensing times are 2^k tau_min, 0 <= k <= N-1
  int repetition_base = 5;     // G
  int repetition_increment = 3;  // F
  double fom_threshold = 1.3;
  SensingDirection direction = SensingDirection::kLongToShort;

  double tau_max() const;
  void validate() const;  // throws std::invalid_argument
};

/// Current sensing-time exponent: tau_n = 2^k tau_min.
struct SensingTimeState {
  int k = 0;
  long coefficient() const { return 1L << k; }  // t_n
};

/// Fixed sensing schedule, one (tau, repetitions) pair per sensing time in
/// Algorithm-1 order: tau_n = 2^n tau_min, M_n = max(1, G + F*(n-1)).
/// The execution direction is applied by the run loop, not here.
std::vector<std::pair<double, int>> sensing_schedule(const ControllerConfig& cfg);

/// Phase from a Fourier coefficient of the prior: theta = arg(conj(p)) / 2
/// mapped into [0, 2*pi), aligning a fringe extremum with the prior's
/// circular mean. |p| < 1e-12 (phase undefined) returns 0.
double phase_from_coefficient(std::complex<double> p);

/// Adaptive control phase for a measurement with sensing-time coefficient t_n:
/// evaluates the prior's Fourier coefficient at omega = 2*pi*(2*t_n)*tau_min.
double choose_phase(const GaussianMixture& prior, long t_n, double tau_min);

/// Posterior width expressed in radians of accumulated Ramsey phase:
/// FOM = sigma_est * 2 * pi * tau_n.
double fom_from_sigma(double sigma_est, double tau_n);

/// fom_from_sigma with sigma_est = sqrt of the mixture variance.
double figure_of_merit(const GaussianMixture& posterior, double tau_n);

/// One halving (FOM above threshold) or doubling (below) of the sensing time,
/// clamped to k in [0, N-1].
SensingTimeState choose_sensing_time(SensingTimeState state, double fom,
                                     const ControllerConfig& cfg);

}  // namespace larmor
