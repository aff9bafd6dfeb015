#include "larmor/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <vector>
#include <stdexcept>

namespace larmor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_settings(const RamseySettings& s) {
  if (!(s.tau > 0.0) || !std::isfinite(s.tau)) {
    throw std::invalid_argument("RamseySettings: tau must be positive");
  }
  if (!(s.t2_star > 0.0)) {  // +inf passes
    throw std::invalid_argument("RamseySettings: t2_star must be positive");
  }
  if (s.outcome != 0 && s.outcome != 1) {
    throw std::invalid_argument("RamseySettings: outcome must be 0 or 1");
  }
}

double visibility(const RamseySettings& s) {
  if (std::isinf(s.t2_star)) return 1.0;
  const double r = s.tau / s.t2_star;
  return std::exp(-r * r);
}

// Comb centres sit on the exact likelihood's maxima,
//   a_l = (2*pi*l - mu*pi - theta) / (2*pi*tau) = (l - phase_cycles) / tau,
// so a_l >= x  <=>  l >= tau*x + phase_cycles.
double phase_cycles(const RamseySettings& s) {
  return (s.theta + static_cast<double>(s.outcome) * std::numbers::pi) / kTwoPi;
}

double centre_of(long l, double phase_cyc, double tau) {
  return (static_cast<double>(l) - phase_cyc) / tau;
}

struct IndexRange {
  long lo;
  long hi;  // inclusive
  bool empty() const { return hi < lo; }
};

// Indices l with centre in [f_lo, f_hi).
IndexRange indices_in(double f_lo, double f_hi, double phase_cyc, double tau) {
  const long lmin = static_cast<long>(std::ceil(tau * f_lo + phase_cyc));
  const long lmax = static_cast<long>(std::ceil(tau * f_hi + phase_cyc)) - 1;
  return {lmin, lmax};
}

// Indices l with centre in [f_lo, f_hi] (closed).
IndexRange indices_in_closed(double f_lo, double f_hi, double phase_cyc, double tau) {
  const long lmin = static_cast<long>(std::ceil(tau * f_lo + phase_cyc));
  const long lmax = static_cast<long>(std::floor(tau * f_hi + phase_cyc));
  return {lmin, lmax};
}

}  // namespace

double likelihood_exact(const RamseySettings& s, double f) {
  check_settings(s);
  const double sign = s.outcome == 0 ? 1.0 : -1.0;
  const double p = 0.5 * (1.0 + sign * visibility(s) * std::cos(kTwoPi * s.tau * f + s.theta));
  return std::clamp(p, 0.0, 1.0);
}

double comb_sigma(double tau) { return 1.0 / (std::numbers::sqrt2 * std::numbers::pi * tau); }

GaussianMixture likelihood_comb(const RamseySettings& s, const FrequencyRange& range) {
  check_settings(s);
  if (!(range.hi > range.lo)) throw std::invalid_argument("likelihood_comb: invalid range");
  const double period = 1.0 / s.tau;
  const double phase_cyc = phase_cycles(s);
  const double sigma = comb_sigma(s.tau);
  const IndexRange idx = indices_in(range.lo - period, range.hi + period, phase_cyc, s.tau);
  GaussianMixture out;
  out.components.reserve(static_cast<std::size_t>(std::max(0L, idx.hi - idx.lo + 1)));
  for (long l = idx.lo; l <= idx.hi; ++l) {
    out.components.push_back({1.0, centre_of(l, phase_cyc, s.tau), sigma});
  }
  return out;
}

GaussianMixture windowed_comb(const RamseySettings& s, const GaussianMixture& prior,
                              const FrequencyRange& range) {
  check_settings(s);
  if (prior.empty()) throw std::invalid_argument("windowed_comb: empty prior");
  const double period = 1.0 / s.tau;
  const double phase_cyc = phase_cycles(s);
  const double sigma = comb_sigma(s.tau);
  const IndexRange full = indices_in(range.lo - period, range.hi + period, phase_cyc, s.tau);

  // Union of per-component index windows via interval merging.
  std::vector<IndexRange> windows;
  windows.reserve(prior.size());
  for (const auto& p : prior.components) {
    const double radius = 4.0 * (sigma + p.sigma);
    IndexRange w = indices_in_closed(p.centre - radius, p.centre + radius, phase_cyc, s.tau);
    w.lo = std::max(w.lo, full.lo);
    w.hi = std::min(w.hi, full.hi);
    if (!w.empty()) windows.push_back(w);
  }
  std::sort(windows.begin(), windows.end(),
            [](const IndexRange& a, const IndexRange& b) { return a.lo < b.lo; });

  GaussianMixture out;
  long next_l = std::numeric_limits<long>::min();
  for (const auto& w : windows) {
    for (long l = std::max(w.lo, next_l); l <= w.hi; ++l) {
      out.components.push_back({1.0, centre_of(l, phase_cyc, s.tau), sigma});
    }
    next_l = std::max(next_l, w.hi + 1);
  }
  return out;
}

}  // namespace larmor
