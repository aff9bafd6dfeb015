#pragma once

#include "larmor/mixture.hpp"

namespace larmor {

/// Settings and outcome of one Ramsey measurement.
struct RamseySettings {
  double theta = 0.0;    // control phase, radians in [0, 2*pi)
  double tau = 0.0;      // sensing time, seconds, > 0
  double t2_star = 0.0;  // coherence time, seconds; may be +infinity
  int outcome = 0;       // mu in {0, 1}
};

/// Prior frequency range [lo, hi), hi > lo. The protocol default width is
/// 1/tau_min.
struct FrequencyRange {
  double lo = 0.0;  // Hz
  double hi = 0.0;  // Hz
  double width() const { return hi - lo; }
};

/// Outcome probability of a Ramsey measurement at frequency f:
/// P = (1 + (-1)^mu * exp(-(tau/T2*)^2) * cos(2 pi tau f + theta)) / 2.
/// P(mu=0|f) + P(mu=1|f) = 1 exactly.
double likelihood_exact(const RamseySettings& s, double f);

/// Common width of the comb Gaussians, 1 / (sqrt(2) * pi * tau).
double comb_sigma(double tau);

/// Gaussian-comb approximation of the likelihood: equal unit amplitudes,
/// width comb_sigma(tau), centres on the exact likelihood's maxima, spaced
/// 1/tau. All centres in [lo - period, hi + period) are enumerated. The
/// dephasing envelope is deliberately not included.
GaussianMixture likelihood_comb(const RamseySettings& s, const FrequencyRange& range);

/// Subset of likelihood_comb keeping only components whose centre lies within
/// 4*(sigma_a + sigma_b) of at least one prior component centre. May return
/// an empty mixture; the caller is expected to fall back to the full comb.
GaussianMixture windowed_comb(const RamseySettings& s, const GaussianMixture& prior,
                              const FrequencyRange& range);

}  // namespace larmor
