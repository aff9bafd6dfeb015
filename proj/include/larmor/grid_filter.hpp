#pragma once

#include <complex>
#include <vector>

#include "larmor/mixture.hpp"
#include "larmor/ramsey.hpp"

namespace larmor {

/// Exact Bayesian filter state on an equally spaced frequency grid.
/// values[i] is the probability mass of the bin centred at
/// lo + (i + 0.5) * (hi - lo) / M; masses sum to 1.
struct GridDistribution {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double bin_width() const { return (hi - lo) / static_cast<double>(values.size()); }
  double bin_centre(int i) const { return lo + (i + 0.5) * bin_width(); }
};

struct GridUpdateResult {
  GridDistribution dist;
  bool degenerate = false;  // all-zero product; previous distribution kept
};

/// Uniform distribution over m >= 2 bins.
GridDistribution init_grid(const FrequencyRange& range, int m);

/// Pointwise Bayes update with the exact likelihood (dephasing included),
/// renormalized. An all-zero product keeps the previous distribution and
/// flags it.
GridUpdateResult update_grid(GridDistribution d, int outcome, const RamseySettings& settings);

/// Discrete convolution with a zero-mean Gaussian kernel of variance
/// kappa^2 * delta_t, reflecting boundaries, renormalized. Kernels wider than
/// 0.8 bins are sampled from the bin-integrated Gaussian truncated at 6
/// kernel sigma; narrower ones use the variance-exact three-point stencil
/// (a 6-sigma sample train cannot represent sub-bin diffusion).
GridDistribution predict_grid(GridDistribution d, double kappa, double delta_t);

/// Centre frequency of the maximum-mass bin, ties toward the lowest bin.
double estimate_grid(const GridDistribution& d);

Moments grid_moments(const GridDistribution& d);

/// sum_i values[i] * exp(i * omega * f_i).
std::complex<double> grid_fourier(const GridDistribution& d, double omega);

}  // namespace larmor
