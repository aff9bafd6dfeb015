#include "larmor/simkit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace larmor {

namespace {

// Fold x into [lo, hi] by mirror reflection (period 2*(hi-lo)).
double reflect_into(double x, double lo, double hi) {
  const double width = hi - lo;
  double y = std::fmod(x - lo, 2.0 * width);
  if (y < 0.0) y += 2.0 * width;
  if (y > width) y = 2.0 * width - y;
  return lo + y;
}

}  // namespace

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : state_(0), inc_((stream << 1u) | 1u) {
  next_u32();
  state_ += seed;
  next_u32();
}

std::uint32_t Pcg32::next_u32() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

double Pcg32::next_double() {
  const std::uint64_t a = next_u32() >> 5;  // 27 bits
  const std::uint64_t b = next_u32() >> 6;  // 26 bits
  return static_cast<double>((a << 26u) | b) * 0x1.0p-53;
}

double Pcg32::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 in (0,1] so the log is finite.
  double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

GroundTruthSignal generate_ground_truth(std::optional<double> f0, double kappa, double step,
                                        double total_time, const FrequencyRange& range,
                                        std::uint64_t seed) {
  if (!(step > 0.0)) throw std::invalid_argument("generate_ground_truth: step must be > 0");
  if (!(total_time > 0.0)) throw std::invalid_argument("generate_ground_truth: total_time must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("generate_ground_truth: kappa must be >= 0");
  if (!(range.hi > range.lo)) throw std::invalid_argument("generate_ground_truth: invalid range");

  Pcg32 rng(seed, 0);
  GroundTruthSignal sig;
  sig.kappa = kappa;
  sig.step = step;
  sig.range = range;
  sig.seed = seed;
  sig.f0 = f0 ? *f0
              : range.lo + (0.1 + 0.8 * rng.next_double()) * range.width();

  const std::size_t n = static_cast<std::size_t>(std::ceil(total_time / step)) + 1;
  sig.values.resize(n);
  sig.values[0] = sig.f0;
  const double step_sd = kappa * std::sqrt(step);
  double x = sig.f0;
  for (std::size_t i = 1; i < n; ++i) {
    x = reflect_into(x + step_sd * rng.next_normal(), range.lo, range.hi);
    sig.values[i] = x;
  }
  return sig;
}

double true_frequency_at(const GroundTruthSignal& sig, double t) {
  if (t < 0.0 || t > sig.total_time()) {
    throw std::out_of_range("true_frequency_at: t outside the signal");
  }
  std::size_t i = static_cast<std::size_t>(t / sig.step);
  if (i >= sig.values.size()) i = sig.values.size() - 1;
  return sig.values[i];
}

int sample_measurement(double f_true, const RamseySettings& settings, Pcg32& rng) {
  RamseySettings s = settings;
  s.outcome = 0;
  const double p0 = likelihood_exact(s, f_true);
  return rng.next_double() < p0 ? 0 : 1;
}

}  // namespace larmor
