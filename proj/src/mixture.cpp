#include "larmor/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace larmor {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;  // sqrt(2*pi)
// Exponents below this underflow exp(); treat as zero overlap.
constexpr double kExpFloor = -700.0;

void check_component(const GaussianComponent& g) {
  if (!(g.sigma > 0.0) || !std::isfinite(g.sigma) || !std::isfinite(g.centre) ||
      !(g.amplitude >= 0.0) || !std::isfinite(g.amplitude)) {
    throw std::invalid_argument("invalid Gaussian component");
  }
}

}  // namespace

GaussianComponent product(const GaussianComponent& g1, const GaussianComponent& g2) {
  check_component(g1);
  check_component(g2);
  const double va = g1.sigma * g1.sigma;
  const double vb = g2.sigma * g2.sigma;
  const double vs = va + vb;
  GaussianComponent out;
  out.sigma = std::sqrt(va * vb / vs);
  out.centre = (g1.centre * vb + g2.centre * va) / vs;
  // The textbook bracketed exponent collapses algebraically to
  // -(a-b)^2 / (2(va+vb)); the collapsed form does not cancel for large
  // centres the way the literal expression does.
  const double d = g1.centre - g2.centre;
  const double ex = -d * d / (2.0 * vs);
  out.amplitude = ex > kExpFloor ? g1.amplitude * g2.amplitude * std::exp(ex) : 0.0;
  return out;
}

GaussianComponent convolve_random_walk(const GaussianComponent& g, double variance_increment) {
  check_component(g);
  if (!(variance_increment >= 0.0)) {
    throw std::invalid_argument("variance_increment must be >= 0");
  }
  if (variance_increment == 0.0) return g;
  const double s2 = std::sqrt(g.sigma * g.sigma + variance_increment);
  return {g.amplitude * g.sigma / s2, g.centre, s2};
}

double kl_divergence(const GaussianComponent& g1, const GaussianComponent& g2) {
  if (!(g1.sigma > 0.0) || !(g2.sigma > 0.0)) {
    throw std::invalid_argument("kl_divergence requires positive sigmas");
  }
  if (g1.centre == g2.centre && g1.sigma == g2.sigma) return 0.0;
  const double d = g1.centre - g2.centre;
  const double v2 = g2.sigma * g2.sigma;
  return std::log(g2.sigma / g1.sigma) + (g1.sigma * g1.sigma + d * d) / (2.0 * v2) - 0.5;
}

GaussianComponent merge_pair(const GaussianComponent& g1, const GaussianComponent& g2) {
  GaussianComponent out;
  out.amplitude = g1.amplitude + g2.amplitude;
  out.centre = 0.5 * (g1.centre + g2.centre);
  out.sigma = std::sqrt(0.5 * (g1.sigma * g1.sigma + g2.sigma * g2.sigma));
  return out;
}

namespace {

double max_amplitude(const std::vector<GaussianComponent>& cs) {
  double m = 0.0;
  for (const auto& c : cs) m = std::max(m, c.amplitude);
  return m;
}

double symmetrized_kl(const GaussianComponent& a, const GaussianComponent& b) {
  return std::min(kl_divergence(a, b), kl_divergence(b, a));
}

}  // namespace

GaussianMixture reduce(const GaussianMixture& m, double a_th, double kl_th) {
  if (m.empty()) throw std::invalid_argument("reduce: uninitialized (empty) mixture");
  if (!(a_th > 0.0 && a_th < 1.0)) throw std::invalid_argument("reduce: A_th must be in (0,1)");
  if (!(kl_th > 0.0)) throw std::invalid_argument("reduce: KL_th must be > 0");

  std::vector<GaussianComponent> cs = m.components;
  const double raw_max = max_amplitude(cs);
  if (raw_max <= 0.0) throw std::invalid_argument("reduce: all-zero amplitudes");

  GaussianMixture out;
  out.generation = m.generation;

  if (raw_max < a_th) {
    // Lost track: keep everything, double the variances, restore scale.
    for (auto& c : cs) {
      c.amplitude /= raw_max;
      c.sigma *= std::numbers::sqrt2;
    }
    out.components = std::move(cs);
    return out;
  }

  // Per-component log(sigma) and 1/(2 sigma^2) turn each pair KL into a few
  // flops; this loop dominates the filter's per-measurement cost.
  std::vector<double> log_sigma, inv_two_var;
  const auto refresh_cache = [&]() {
    log_sigma.resize(cs.size());
    inv_two_var.resize(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      log_sigma[i] = std::log(cs[i].sigma);
      inv_two_var[i] = 0.5 / (cs[i].sigma * cs[i].sigma);
    }
  };
  const auto sym_kl_cached = [&](std::size_t i, std::size_t j) {
    const double d = cs[i].centre - cs[j].centre;
    const double d2 = d * d;
    const double vi = cs[i].sigma * cs[i].sigma;
    const double vj = cs[j].sigma * cs[j].sigma;
    const double kij = log_sigma[j] - log_sigma[i] + (vi + d2) * inv_two_var[j] - 0.5;
    const double kji = log_sigma[i] - log_sigma[j] + (vj + d2) * inv_two_var[i] - 0.5;
    return std::min(kij, kji);
  };

  for (;;) {
    bool changed = false;

    const double mx = max_amplitude(cs);
    if (mx != 1.0) {
      for (auto& c : cs) c.amplitude /= mx;
    }

    std::vector<GaussianComponent> kept;
    kept.reserve(cs.size());
    for (const auto& c : cs) {
      if (c.amplitude >= a_th) kept.push_back(c);
    }
    if (kept.size() != cs.size()) changed = true;
    cs = std::move(kept);

    // Greedy merging: closest pair by symmetrized KL first, re-evaluated
    // after each merge; exact ties resolved by lower index pair.
    while (cs.size() > 1) {
      refresh_cache();
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
          const double d = sym_kl_cached(i, j);
          if (d < best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      }
      if (!(best < kl_th)) break;
      GaussianComponent merged = merge_pair(cs[bi], cs[bj]);
      cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(bj));
      cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(bi));
      cs.push_back(merged);
      changed = true;
    }

    if (!changed) break;
  }

  out.components = std::move(cs);
  return out;
}

Moments mixture_moments(const GaussianMixture& m) {
  if (m.empty()) throw std::invalid_argument("mixture_moments: empty mixture");
  double w_sum = 0.0, mean_acc = 0.0, sq_acc = 0.0;
  for (const auto& c : m.components) {
    const double w = c.amplitude * c.sigma;
    w_sum += w;
    mean_acc += w * c.centre;
    sq_acc += w * (c.sigma * c.sigma + c.centre * c.centre);
  }
  if (!(w_sum > 0.0)) throw std::invalid_argument("mixture_moments: degenerate mixture");
  Moments out;
  out.mean = mean_acc / w_sum;
  out.variance = std::max(sq_acc / w_sum - out.mean * out.mean, 0.0);
  return out;
}

std::complex<double> fourier_coefficient(const GaussianMixture& m, double omega) {
  if (m.empty()) throw std::invalid_argument("fourier_coefficient: empty mixture");
  if (!std::isfinite(omega)) throw std::invalid_argument("fourier_coefficient: omega not finite");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& c : m.components) {
    const double decay = -0.5 * omega * omega * c.sigma * c.sigma;
    const double mag =
        decay > kExpFloor ? kSqrt2Pi * c.amplitude * c.sigma * std::exp(decay) : 0.0;
    if (mag != 0.0) acc += std::polar(mag, omega * c.centre);
  }
  return acc;
}

double evaluate(const GaussianMixture& m, double f) {
  double acc = 0.0;
  for (const auto& c : m.components) {
    const double z = (f - c.centre) / c.sigma;
    const double ex = -0.5 * z * z;
    if (ex > kExpFloor) acc += c.amplitude * std::exp(ex);
  }
  return acc;
}

}  // namespace larmor
