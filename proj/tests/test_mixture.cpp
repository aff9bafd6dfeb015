#include <doctest.h>

#include <cmath>
#include <numbers>

#include "larmor/mixture.hpp"
#include "larmor/simkit.hpp"
#include "oracles.hpp"

using namespace larmor;

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;

GaussianMixture mix(std::initializer_list<GaussianComponent> cs) {
  GaussianMixture m;
  m.components = cs;
  return m;
}
}  // namespace

TEST_CASE("product of identical zero-mean unit Gaussians") {
  const auto r = product({1, 0, 1}, {1, 0, 1});
  CHECK(r.amplitude == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.centre == doctest::Approx(0.0));
  CHECK(r.sigma == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-14));
}

TEST_CASE("product of shifted unit Gaussians") {
  const auto r = product({1, 0, 1}, {1, 2, 1});
  CHECK(r.amplitude == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(r.centre == doctest::Approx(1.0));
  CHECK(r.sigma == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-14));
}

TEST_CASE("product narrow x wide co-centred") {
  const auto r = product({2, 5, 0.1}, {1, 5, 10});
  CHECK(r.centre == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.sigma == doctest::Approx(0.1 * 10.0 / std::sqrt(100.01)).epsilon(1e-12));
  CHECK(r.amplitude == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("product equals the stable rewrite of the literal exponent") {
  // The literal bracketed exponent and -(a-b)^2/(2(va+vb)) agree where the
  // literal form is numerically safe (small centres).
  Pcg32 rng(7, 99);
  for (int i = 0; i < 200; ++i) {
    const double a = 4.0 * (rng.next_double() - 0.5);
    const double b = 4.0 * (rng.next_double() - 0.5);
    const double sa = 0.3 + rng.next_double();
    const double sb = 0.3 + rng.next_double();
    const double va = sa * sa, vb = sb * sb;
    const double literal =
        (std::pow(a * vb + b * va, 2) / (va + vb) - (a * a * vb + b * b * va)) / (2 * va * vb);
    const auto r = product({1, a, sa}, {1, b, sb});
    CHECK(r.amplitude == doctest::Approx(std::exp(literal)).epsilon(1e-10));
  }
}

TEST_CASE("product matches the pointwise numerical product on a grid") {
  Pcg32 rng(11, 5);
  for (int i = 0; i < 100; ++i) {
    const GaussianComponent g1{0.2 + rng.next_double(), 10.0 * (rng.next_double() - 0.5),
                               0.2 + 2.0 * rng.next_double()};
    const GaussianComponent g2{0.2 + rng.next_double(), 10.0 * (rng.next_double() - 0.5),
                               0.2 + 2.0 * rng.next_double()};
    const auto r = product(g1, g2);
    const double lo = std::min(g1.centre - 6 * g1.sigma, g2.centre - 6 * g2.sigma);
    const double hi = std::max(g1.centre + 6 * g1.sigma, g2.centre + 6 * g2.sigma);
    for (int k = 0; k <= 200; ++k) {
      const double f = lo + (hi - lo) * k / 200.0;
      const double expected = oracles::gauss_density(f, g1.amplitude, g1.centre, g1.sigma) *
                              oracles::gauss_density(f, g2.amplitude, g2.centre, g2.sigma);
      const double got = oracles::gauss_density(f, r.amplitude, r.centre, r.sigma);
      CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("product clamps the amplitude to zero for astronomically distant centres") {
  const auto r = product({1, 0, 1}, {1, 1e9, 1});
  CHECK(r.amplitude == 0.0);
  CHECK(std::isfinite(r.centre));
  CHECK(r.sigma > 0.0);
}

TEST_CASE("convolve_random_walk examples") {
  const GaussianComponent g{1, 0, 1};
  const auto same = convolve_random_walk(g, 0.0);
  CHECK(same.amplitude == 1.0);
  CHECK(same.sigma == 1.0);

  const auto r = convolve_random_walk({1, 3, 1}, 3.0);
  CHECK(r.amplitude == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.centre == 3.0);
  CHECK(r.sigma == doctest::Approx(2.0).epsilon(1e-14));

  const auto r2 = convolve_random_walk({2, -1, 0.5}, 0.75);
  CHECK(r2.amplitude == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r2.centre == -1.0);
  CHECK(r2.sigma == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("convolve_random_walk preserves the integral and matches discrete convolution") {
  Pcg32 rng(3, 21);
  for (int i = 0; i < 50; ++i) {
    const GaussianComponent g{0.5 + rng.next_double(), 4.0 * (rng.next_double() - 0.5),
                              0.3 + rng.next_double()};
    const double v = 0.1 + 2.0 * rng.next_double();
    const auto r = convolve_random_walk(g, v);
    CHECK(r.amplitude * r.sigma == doctest::Approx(g.amplitude * g.sigma).epsilon(1e-15));

    const double span = 10.0 * std::sqrt(g.sigma * g.sigma + v);
    const auto conv = oracles::convolve_density(
        [&](double f) { return oracles::gauss_density(f, g.amplitude, g.centre, g.sigma); },
        g.centre - span, g.centre + span, 4000, v);
    const double h = 2.0 * span / 4000;
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t k = 0; k < conv.size(); ++k) {
      const double f = g.centre - span + static_cast<double>(k) * h;
      m0 += conv[k];
      m1 += conv[k] * f;
      m2 += conv[k] * f * f;
    }
    const double mass = m0 * h;
    const double mean = m1 / m0;
    const double var = m2 / m0 - mean * mean;
    CHECK(mass == doctest::Approx(r.amplitude * r.sigma * kSqrt2Pi).epsilon(1e-6));
    CHECK(mean == doctest::Approx(r.centre).epsilon(1e-6));
    CHECK(var == doctest::Approx(r.sigma * r.sigma).epsilon(1e-6));
  }
}

TEST_CASE("kl_divergence closed form") {
  CHECK(kl_divergence({1, 0, 1}, {1, 0, 1}) == 0.0);
  for (double d : {0.25, 1.0, 3.0}) {
    CHECK(kl_divergence({1, 0, 1}, {1, d, 1}) == doctest::Approx(d * d / 2).epsilon(1e-14));
  }
  CHECK(kl_divergence({1, 0, 1}, {1, 0, 2}) ==
        doctest::Approx(std::log(2.0) + 1.0 / 8.0 - 0.5).epsilon(1e-14));
}

TEST_CASE("kl_divergence is nonnegative and matches the quadrature oracle") {
  Pcg32 rng(17, 2);
  for (int i = 0; i < 60; ++i) {
    const double s1 = std::pow(10.0, -2.0 + 4.0 * rng.next_double());
    const double s2 = std::pow(10.0, -2.0 + 4.0 * rng.next_double());
    const double c1 = rng.next_double();
    const double c2 = c1 + (2.0 * rng.next_double() - 1.0) * 10.0 * s1;
    const double kl = kl_divergence({1, c1, s1}, {1, c2, s2});
    CHECK(kl >= 0.0);
    CHECK(std::abs(kl - oracles::kl_quadrature(c1, s1, c2, s2)) < 1e-6);
  }
}

TEST_CASE("merge_pair examples") {
  auto m1 = merge_pair({1, 0, 1}, {1, 0, 1});
  CHECK(m1.amplitude == 2.0);
  CHECK(m1.centre == 0.0);
  CHECK(m1.sigma == 1.0);

  auto m2 = merge_pair({1, 0, 1}, {1, 2, 1});
  CHECK(m2.amplitude == 2.0);
  CHECK(m2.centre == 1.0);
  CHECK(m2.sigma == 1.0);

  auto m3 = merge_pair({0.5, 0, 1}, {1.5, 4, 3});
  CHECK(m3.amplitude == 2.0);
  CHECK(m3.centre == 2.0);
  CHECK(m3.sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("reduce keeps a single component") {
  const auto r = reduce(mix({{1, 0, 1}}));
  REQUIRE(r.size() == 1);
  CHECK(r.components[0].amplitude == 1.0);
}

TEST_CASE("reduce prunes below the amplitude threshold") {
  const auto r = reduce(mix({{1, 0, 1}, {0.01, 5, 1}}));
  REQUIRE(r.size() == 1);
  CHECK(r.components[0].centre == 0.0);
}

TEST_CASE("reduce merges a near-identical pair") {
  CHECK(kl_divergence({1, 0, 1}, {1, 0.001, 1}) < 0.001);
  const auto r = reduce(mix({{1, 0, 1}, {1, 0.001, 1}}));
  REQUIRE(r.size() == 1);
  CHECK(r.components[0].centre == doctest::Approx(0.0005));
  CHECK(r.components[0].sigma == doctest::Approx(1.0).epsilon(1e-6));
  // merged amplitude renormalized to 1
  CHECK(r.components[0].amplitude == 1.0);
}

TEST_CASE("reduce lost-track branch keeps components and doubles variances") {
  const auto m = mix({{0.02, 0, 1}, {0.01, 5, 2}});
  const auto r = reduce(m);
  REQUIRE(r.size() == 2);
  CHECK(r.components[0].sigma == doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
  CHECK(r.components[1].sigma == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-14));
  CHECK(r.components[0].amplitude == doctest::Approx(1.0));
  CHECK(r.components[1].amplitude == doctest::Approx(0.5));
}

TEST_CASE("reduce rejects an empty mixture") {
  CHECK_THROWS_AS(reduce(GaussianMixture{}), std::invalid_argument);
}

TEST_CASE("reduce is idempotent and never increases the count") {
  Pcg32 rng(23, 8);
  for (int trial = 0; trial < 200; ++trial) {
    GaussianMixture m;
    const int n = 1 + static_cast<int>(rng.next_double() * 8);
    for (int i = 0; i < n; ++i) {
      m.components.push_back({0.05 + rng.next_double(), 3.0 * (rng.next_double() - 0.5),
                              0.05 + rng.next_double()});
    }
    const auto r1 = reduce(m);
    CHECK(r1.size() <= m.size());
    const auto r2 = reduce(r1);
    REQUIRE(r2.size() == r1.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
      CHECK(r2.components[i].amplitude == r1.components[i].amplitude);
      CHECK(r2.components[i].centre == r1.components[i].centre);
      CHECK(r2.components[i].sigma == r1.components[i].sigma);
    }
    // post-conditions: relative amplitude floor and pairwise KL separation
    for (const auto& c : r1.components) CHECK(c.amplitude >= 0.04);
    for (std::size_t i = 0; i < r1.size(); ++i) {
      for (std::size_t j = i + 1; j < r1.size(); ++j) {
        const double d = std::min(kl_divergence(r1.components[i], r1.components[j]),
                                  kl_divergence(r1.components[j], r1.components[i]));
        CHECK(d >= 0.001);
      }
    }
  }
}

TEST_CASE("mixture_moments examples") {
  const auto m1 = mixture_moments(mix({{1, 3, 2}}));
  CHECK(m1.mean == doctest::Approx(3.0));
  CHECK(m1.variance == doctest::Approx(4.0));

  const auto m2 = mixture_moments(mix({{1, -1, 1}, {1, 1, 1}}));
  CHECK(m2.mean == doctest::Approx(0.0));
  CHECK(m2.variance == doctest::Approx(2.0));

  const auto m3 = mixture_moments(mix({{2, 0, 1}, {1, 0, 1}}));
  CHECK(m3.mean == doctest::Approx(0.0));
  CHECK(m3.variance == doctest::Approx(1.0));
}

TEST_CASE("mixture_moments matches quadrature") {
  Pcg32 rng(31, 4);
  for (int trial = 0; trial < 40; ++trial) {
    GaussianMixture m;
    const int n = 1 + static_cast<int>(rng.next_double() * 4);
    for (int i = 0; i < n; ++i) {
      m.components.push_back(
          {0.1 + rng.next_double(), 4.0 * (rng.next_double() - 0.5), 0.2 + rng.next_double()});
    }
    const auto mom = mixture_moments(m);
    const auto st = oracles::grid_stats([&](double f) { return evaluate(m, f); }, -40.0, 40.0,
                                        200000);
    CHECK(mom.mean == doctest::Approx(st.mean).epsilon(1e-6));
    CHECK(mom.variance == doctest::Approx(st.variance).epsilon(1e-6));
  }
}

TEST_CASE("mixture_moments rejects degenerate input") {
  CHECK_THROWS_AS(mixture_moments(GaussianMixture{}), std::invalid_argument);
  CHECK_THROWS_AS(mixture_moments(mix({{0, 0, 1}, {0, 2, 1}})), std::invalid_argument);
}

TEST_CASE("fourier_coefficient at omega 0 is the exact total mass") {
  const auto m = mix({{1, 0, 1}, {0.5, 2, 3}});
  const auto p = fourier_coefficient(m, 0.0);
  CHECK(p.real() == kSqrt2Pi * (1.0 * 1.0 + 0.5 * 3.0));
  CHECK(p.imag() == 0.0);
}

TEST_CASE("fourier_coefficient single component modulus and argument") {
  const double c = 1.7, s = 0.6, om = 2.3;
  const auto p = fourier_coefficient(mix({{1, c, s}}), om);
  CHECK(std::abs(p) == doctest::Approx(kSqrt2Pi * s * std::exp(-om * om * s * s / 2)).epsilon(1e-12));
  CHECK(std::arg(p) == doctest::Approx(std::fmod(om * c, 2 * std::numbers::pi) - 2 * std::numbers::pi)
                           .epsilon(1e-12));
}

TEST_CASE("fourier_coefficient of a mirror pair is real") {
  const auto p = fourier_coefficient(mix({{1, -2.5, 0.7}, {1, 2.5, 0.7}}), 1.1);
  CHECK(std::abs(p.imag()) < 1e-15 * std::abs(p.real()) + 1e-300);
}

TEST_CASE("fourier_coefficient matches quadrature") {
  Pcg32 rng(41, 6);
  for (int trial = 0; trial < 30; ++trial) {
    const double amp = 0.2 + rng.next_double();
    const double c = 3.0 * (rng.next_double() - 0.5);
    const double s = 0.2 + rng.next_double();
    const double om = 3.0 * rng.next_double() / s;
    const auto p = fourier_coefficient(mix({{amp, c, s}}), om);
    const auto q = oracles::fourier_quadrature(amp, c, s, om);
    CHECK(p.real() == doctest::Approx(q.real()).epsilon(1e-6));
    CHECK(p.imag() == doctest::Approx(q.imag()).epsilon(1e-6));
  }
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(mix({{1, 0, 1}}), 0.0) == 1.0);
  CHECK(evaluate(mix({{1, 0, 1}}), 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(evaluate(mix({{1, 0, 1}, {2, 3, 1}}), 3.0) ==
        doctest::Approx(2.0 + std::exp(-4.5)).epsilon(1e-14));
}
