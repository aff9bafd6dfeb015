#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace larmor {

/// One weighted Gaussian term of a mixture: amplitude * exp(-(f-centre)^2 / (2 sigma^2)).
/// Amplitudes are density scales (not masses); the mass of a component is
/// amplitude * sigma * sqrt(2*pi).
struct GaussianComponent {
  double amplitude = 0.0;  // >= 0
  double centre = 0.0;     // Hz
  double sigma = 0.0;      // Hz, > 0
};

/// Ordered collection of components approximating an (unnormalized) density
/// over frequency. Empty only in the pre-initialization state.
struct GaussianMixture {
  std::vector<GaussianComponent> components;
  std::uint64_t generation = 0;  // number of updates applied

  bool empty() const { return components.empty(); }
  std::size_t size() const { return components.size(); }
};

struct Moments {
  double mean = 0.0;      // Hz
  double variance = 0.0;  // Hz^2
};

/// Pointwise product of two Gaussians, itself a Gaussian.
/// Centres astronomically far apart yield amplitude 0 (negligible overlap),
/// not a numerical exception.
GaussianComponent product(const GaussianComponent& g1, const GaussianComponent& g2);

/// Convolution with a zero-mean Gaussian kernel of the given variance.
/// Centre unchanged, sigma' = sqrt(sigma^2 + variance_increment),
/// amplitude scaled by sigma/sigma' so the integral is preserved exactly.
GaussianComponent convolve_random_walk(const GaussianComponent& g, double variance_increment);

/// KL divergence between the normalized shapes (amplitudes ignored):
/// log(s2/s1) + (s1^2 + (c1-c2)^2) / (2 s2^2) - 1/2.
double kl_divergence(const GaussianComponent& g1, const GaussianComponent& g2);

/// Merge rule: mean and variance averaged, amplitudes summed.
GaussianComponent merge_pair(const GaussianComponent& g1, const GaussianComponent& g2);

/// Pruning and merging pass.
///
/// If every raw amplitude is below a_th the track is considered lost: nothing
/// is removed or merged, every variance is doubled, and amplitudes are
/// rescaled so the maximum is 1. Otherwise amplitudes are rescaled to max 1,
/// components below a_th are pruned and pairs whose symmetrized KL divergence
/// (min of the two directions) is below kl_th are merged greedily, closest
/// pair first, iterating until the surviving set is stable.
///
/// Throws std::invalid_argument for an empty mixture or thresholds outside
/// their domains (a_th in (0,1), kl_th > 0).
GaussianMixture reduce(const GaussianMixture& m, double a_th = 0.04, double kl_th = 0.001);

/// Mean and variance of the normalized density. Component masses are
/// proportional to amplitude * sigma. Throws on an empty or all-zero mixture.
Moments mixture_moments(const GaussianMixture& m);

/// Characteristic-function value of the unnormalized density at omega:
/// sum_l sqrt(2 pi) C_l sigma_l exp(-omega^2 sigma_l^2 / 2 + i omega c_l).
std::complex<double> fourier_coefficient(const GaussianMixture& m, double omega);

/// Pointwise density sum_l C_l exp(-(f - c_l)^2 / (2 sigma_l^2)).
double evaluate(const GaussianMixture& m, double f);

}  // namespace larmor
