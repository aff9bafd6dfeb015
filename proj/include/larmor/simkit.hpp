#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "larmor/ramsey.hpp"

namespace larmor {

/// PCG-XSH-RR 32-bit generator. Chosen over <random> engines/distributions
/// because the normal draw must be bit-reproducible across runs and
/// platforms; streams (distinct increments) keep signal generation and the
/// two filters' measurement noise independent under one run seed.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();
  /// Standard normal via Box-Muller (second value cached).
  double next_normal();

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Discretized Wiener trajectory of the true Larmor frequency, one value per
/// step of length `step` seconds, reflected into the range.
struct GroundTruthSignal {
  double f0 = 0.0;     // Hz
  double kappa = 0.0;  // Hz / sqrt(s)
  double step = 0.0;   // seconds (= tau_min)
  FrequencyRange range;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double total_time() const { return step * static_cast<double>(values.size() - 1); }
};

/// Generates values[i+1] = reflect(values[i] + kappa * sqrt(step) * z_i) from
/// the seeded generator (stream 0). When f0 is not given it is drawn
/// uniformly from the central 80% of the range using the same stream, so one
/// seed fully determines the trajectory.
GroundTruthSignal generate_ground_truth(std::optional<double> f0, double kappa, double step,
                                        double total_time, const FrequencyRange& range,
                                        std::uint64_t seed);

/// Piecewise-constant lookup values[floor(t/step)]; throws on t outside
/// [0, total_time].
double true_frequency_at(const GroundTruthSignal& sig, double t);

/// Bernoulli outcome draw: mu = 0 with probability likelihood_exact(mu=0, f_true).
int sample_measurement(double f_true, const RamseySettings& settings, Pcg32& rng);

/// Elapsed-time bookkeeping: each measurement advances by tau + t_oh.
struct ExperimentClock {
  double t = 0.0;     // seconds elapsed
  double t_oh = 0.0;  // overhead per measurement

  void advance(double tau) { t += tau + t_oh; }
};

}  // namespace larmor
