#pragma once

// Test-only numerical oracles, independent of the mixture algebra they check:
// plain quadrature and discrete convolution on dense grids.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

inline double gauss_density(double f, double amp, double centre, double sigma) {
  const double z = (f - centre) / sigma;
  return amp * std::exp(-0.5 * z * z);
}

/// Composite Simpson quadrature with n (even) intervals.
inline double simpson(const std::function<double(double)>& fn, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = fn(a) + fn(b);
  for (int i = 1; i < n; ++i) {
    acc += fn(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

struct GridStats {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

inline GridStats grid_stats(const std::function<double(double)>& density, double a, double b,
                            int n) {
  const double h = (b - a) / n;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double f = a + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;  // trapezoid
    const double d = w * density(f);
    m0 += d;
    m1 += d * f;
    m2 += d * f * f;
  }
  GridStats out;
  out.mass = m0 * h;
  out.mean = m1 / m0;
  out.variance = m2 / m0 - out.mean * out.mean;
  return out;
}

/// KL of two normalized Gaussians by direct quadrature of p*log(p/q).
inline double kl_quadrature(double c1, double s1, double c2, double s2) {
  const double norm1 = 1.0 / (s1 * std::sqrt(2.0 * std::numbers::pi));
  const double norm2 = 1.0 / (s2 * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double f) {
    const double zp = (f - c1) / s1;
    const double zq = (f - c2) / s2;
    const double logp = std::log(norm1) - 0.5 * zp * zp;
    const double logq = std::log(norm2) - 0.5 * zq * zq;
    return std::exp(logp) * (logp - logq);
  };
  return simpson(integrand, c1 - 40.0 * s1, c1 + 40.0 * s1, 40000);
}

/// Characteristic-function value of a single Gaussian term by quadrature.
inline std::complex<double> fourier_quadrature(double amp, double centre, double sigma,
                                               double omega) {
  auto re = [&](double f) { return gauss_density(f, amp, centre, sigma) * std::cos(omega * f); };
  auto im = [&](double f) { return gauss_density(f, amp, centre, sigma) * std::sin(omega * f); };
  const double a = centre - 12.0 * sigma, b = centre + 12.0 * sigma;
  return {simpson(re, a, b, 20000), simpson(im, a, b, 20000)};
}

/// Discretized density convolved with a zero-mean Gaussian kernel; returns
/// samples of the convolved density on the same grid.
inline std::vector<double> convolve_density(const std::function<double(double)>& density,
                                            double a, double b, int n, double kernel_variance) {
  const double h = (b - a) / n;
  const double ks = std::sqrt(kernel_variance);
  const int radius = static_cast<int>(std::ceil(8.0 * ks / h));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double w = std::exp(-0.5 * (j * h) * (j * h) / kernel_variance);
    kernel[static_cast<std::size_t>(j + radius)] = w;
    ksum += w;
  }
  for (auto& w : kernel) w /= ksum;
  std::vector<double> src(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) src[static_cast<std::size_t>(i)] = density(a + i * h);
  std::vector<double> out(src.size(), 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      const int k = i + j;
      if (k < 0 || k > n) continue;
      out[static_cast<std::size_t>(i)] +=
          src[static_cast<std::size_t>(k)] * kernel[static_cast<std::size_t>(j + radius)];
    }
  }
  return out;
}

}  // namespace oracles
