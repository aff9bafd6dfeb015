#include "larmor/gaussian_filter.hpp"

#include <stdexcept>

namespace larmor {

FilterState init_uniform(const FrequencyRange& range, const FilterConfig& config) {
  if (!(range.hi > range.lo)) throw std::invalid_argument("init_uniform: invalid range");
  FilterState state;
  state.range = range;
  state.uniform_flag = true;
  state.config = config;
  return state;
}

FilterState update(const FilterState& state, int outcome, const RamseySettings& settings) {
  RamseySettings s = settings;
  s.outcome = outcome;

  FilterState next = state;
  next.posterior.generation = state.posterior.generation + 1;

  if (state.uniform_flag) {
    // Uniform prior: the posterior is the comb itself, restricted to the
    // range (peaks in the padding would double-count edge modes).
    GaussianMixture comb = likelihood_comb(s, state.range);
    next.posterior.components.clear();
    for (const auto& c : comb.components) {
      if (c.centre >= state.range.lo && c.centre < state.range.hi) {
        next.posterior.components.push_back(c);
      }
    }
    next.uniform_flag = false;
    return next;
  }

  GaussianMixture lik = windowed_comb(s, state.posterior, state.range);
  if (lik.empty()) {
    // Window excluded every peak; dropping the measurement would silently
    // discard data, so use the full comb.
    lik = likelihood_comb(s, state.range);
  }

  GaussianMixture products;
  products.generation = next.posterior.generation;
  products.components.reserve(lik.size() * state.posterior.size());
  for (const auto& l : lik.components) {
    for (const auto& p : state.posterior.components) {
      products.components.push_back(product(l, p));
    }
  }

  next.posterior = reduce(products, state.config.amplitude_threshold, state.config.kl_threshold);
  return next;
}

FilterState predict(const FilterState& state, double delta_t) {
  if (!(delta_t >= 0.0)) throw std::invalid_argument("predict: delta_t must be >= 0");
  if (state.uniform_flag) return state;  // diffusion leaves the uniform prior uniform
  const double increment = state.config.kappa * state.config.kappa * delta_t;
  if (increment == 0.0) return state;
  FilterState next = state;
  for (auto& c : next.posterior.components) {
    c = convolve_random_walk(c, increment);
  }
  return next;
}

double estimate(const FilterState& state) {
  if (state.uniform_flag || state.posterior.empty()) {
    throw std::runtime_error("estimate: filter not initialized by any measurement");
  }
  const auto& cs = state.posterior.components;
  double best_mass = -1.0;
  double best_centre = 0.0;
  for (const auto& c : cs) {
    const double mass = c.amplitude * c.sigma;
    if (mass > best_mass || (mass == best_mass && c.centre < best_centre)) {
      best_mass = mass;
      best_centre = c.centre;
    }
  }
  return best_centre;
}

int parameter_count(const FilterState& state) {
  return state.uniform_flag ? 0 : 3 * static_cast<int>(state.posterior.size());
}

}  // namespace larmor
