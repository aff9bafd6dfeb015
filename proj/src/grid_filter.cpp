#include "larmor/grid_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace larmor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void renormalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (!(sum > 0.0)) throw std::runtime_error("grid: zero total mass");
  const double inv = 1.0 / sum;
  for (double& x : v) x *= inv;
}

// Mirror an out-of-range bin index back into [0, m). Period 2m triangle map,
// mirror planes at -0.5 and m-0.5, so a uniform distribution stays uniform.
int reflect_index(long i, long m) {
  const long period = 2 * m;
  long r = i % period;
  if (r < 0) r += period;
  if (r >= m) r = period - 1 - r;
  return static_cast<int>(r);
}

}  // namespace

GridDistribution init_grid(const FrequencyRange& range, int m) {
  if (m < 2) throw std::invalid_argument("init_grid: M must be >= 2");
  if (!(range.hi > range.lo)) throw std::invalid_argument("init_grid: invalid range");
  GridDistribution d;
  d.lo = range.lo;
  d.hi = range.hi;
  d.values.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
  return d;
}

GridUpdateResult update_grid(GridDistribution d, int outcome, const RamseySettings& settings) {
  RamseySettings s = settings;
  s.outcome = outcome;
  const int m = d.size();
  const double df = d.bin_width();
  const double sign = outcome == 0 ? 1.0 : -1.0;
  const double vis = std::isinf(s.t2_star) ? 1.0 : std::exp(-(s.tau / s.t2_star) * (s.tau / s.t2_star));
  const double w = kTwoPi * s.tau;
  double sum = 0.0;
  std::vector<double> next(d.values.size());
  for (int i = 0; i < m; ++i) {
    const double f = d.lo + (i + 0.5) * df;
    const double lik = 0.5 * (1.0 + sign * vis * std::cos(w * f + s.theta));
    next[static_cast<std::size_t>(i)] = d.values[static_cast<std::size_t>(i)] * lik;
    sum += next[static_cast<std::size_t>(i)];
  }
  GridUpdateResult out;
  if (!(sum > 0.0)) {
    out.dist = std::move(d);  // keep the previous distribution
    out.degenerate = true;
    return out;
  }
  const double inv = 1.0 / sum;
  for (double& x : next) x *= inv;
  out.dist = std::move(d);
  out.dist.values = std::move(next);
  return out;
}

GridDistribution predict_grid(GridDistribution d, double kappa, double delta_t) {
  if (!(delta_t >= 0.0)) throw std::invalid_argument("predict_grid: delta_t must be >= 0");
  const double variance = kappa * kappa * delta_t;
  if (variance == 0.0) return d;
  const double df = d.bin_width();
  const double sigma_bins = std::sqrt(variance) / df;
  const long m = d.size();

  std::vector<double> kernel;
  long radius = 0;
  if (sigma_bins < 0.8) {
    // A 6-sigma sample train cannot carry sub-bin variance; the three-point
    // stencil w_{+-1} = s^2/2 is variance-exact and positive for s < 1.
    radius = 1;
    const double w1 = 0.5 * sigma_bins * sigma_bins;
    kernel = {w1, 1.0 - 2.0 * w1, w1};
  } else {
    radius = static_cast<long>(std::ceil(6.0 * sigma_bins));
    kernel.resize(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (long j = -radius; j <= radius; ++j) {
      // Bin-integrated Gaussian: mass falling into bin j.
      const double a = (static_cast<double>(j) - 0.5) / sigma_bins;
      const double b = (static_cast<double>(j) + 0.5) / sigma_bins;
      const double wj = 0.5 * (std::erf(b / std::numbers::sqrt2) - std::erf(a / std::numbers::sqrt2));
      kernel[static_cast<std::size_t>(j + radius)] = wj;
      sum += wj;
    }
    for (double& wj : kernel) wj /= sum;
  }

  std::vector<double> next(d.values.size(), 0.0);
  for (long i = 0; i < m; ++i) {
    const double vi = d.values[static_cast<std::size_t>(i)];
    if (vi == 0.0) continue;
    for (long j = -radius; j <= radius; ++j) {
      next[static_cast<std::size_t>(reflect_index(i + j, m))] +=
          vi * kernel[static_cast<std::size_t>(j + radius)];
    }
  }
  renormalize(next);
  d.values = std::move(next);
  return d;
}

double estimate_grid(const GridDistribution& d) {
  int best = 0;
  for (int i = 1; i < d.size(); ++i) {
    if (d.values[static_cast<std::size_t>(i)] > d.values[static_cast<std::size_t>(best)]) best = i;
  }
  return d.bin_centre(best);
}

Moments grid_moments(const GridDistribution& d) {
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    const double f = d.bin_centre(i);
    const double v = d.values[static_cast<std::size_t>(i)];
    mean += v * f;
    sq += v * f * f;
  }
  Moments out;
  out.mean = mean;
  out.variance = std::max(sq - mean * mean, 0.0);
  return out;
}

std::complex<double> grid_fourier(const GridDistribution& d, double omega) {
  std::complex<double> acc{0.0, 0.0};
  for (int i = 0; i < d.size(); ++i) {
    acc += std::polar(d.values[static_cast<std::size_t>(i)], omega * d.bin_centre(i));
  }
  return acc;
}

}  // namespace larmor
