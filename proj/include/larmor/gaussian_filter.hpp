#pragma once

#include "larmor/mixture.hpp"
#include "larmor/ramsey.hpp"

namespace larmor {

struct FilterConfig {
  double amplitude_threshold = 0.04;  // A_th
  double kl_threshold = 0.001;        // KL_th
  double kappa = 0.0;                 // Hz / sqrt(s)
  int component_cap = 20;             // observational cap, not enforced
};

/// Immutable state of the Gaussian-mixture Bayesian filter. uniform_flag is
/// true before the first update (empty posterior); afterwards the posterior
/// is a reduced mixture.
struct FilterState {
  GaussianMixture posterior;
  FrequencyRange range;
  bool uniform_flag = true;
  FilterConfig config;
};

FilterState init_uniform(const FrequencyRange& range, const FilterConfig& config);

/// Bayes update for one measurement outcome. From the uniform state the
/// posterior becomes the likelihood comb restricted to the range; otherwise
/// the windowed comb (full comb if the window is empty) is multiplied
/// pairwise into the prior and the result reduced.
FilterState update(const FilterState& state, int outcome, const RamseySettings& settings);

/// Random-walk prediction over delta_t seconds: every component convolved
/// with variance increment kappa^2 * delta_t. Total mass preserved exactly.
FilterState predict(const FilterState& state, double delta_t);

/// Point estimate: centre of the largest-mass component (mass = C * sigma),
/// ties broken toward the lowest centre. Throws on the uniform state.
double estimate(const FilterState& state);

/// 3 * component count (0 for the uniform state).
int parameter_count(const FilterState& state);

}  // namespace larmor
