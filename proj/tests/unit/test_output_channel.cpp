#include <cmath>

#include "doctest.h"
#include "jcr/output_channel.hpp"
#include "jcr/rng.hpp"
#include "oracles.hpp"

using namespace jcr;

namespace {

// g and g' from one-dimensional quadrature of the per-component posterior.
OutputResult oracle_output(Complex u, const CellBounds& c, double psi, double noise) {
  const auto re = oracle::cell_posterior_quadrature(u.real(), psi / 2, noise / 2, c.re_lo, c.re_up);
  const auto im = oracle::cell_posterior_quadrature(u.imag(), psi / 2, noise / 2, c.im_lo, c.im_up);
  OutputResult r;
  r.z_mean = {re.mean, im.mean};
  r.z_variance = re.variance + im.variance;
  r.g = (r.z_mean - u) / psi;
  r.g_prime = (1 - r.z_variance / psi) / psi;
  return r;
}

}  // namespace

TEST_CASE("unquantized observations use the gaussian residual") {
  const CellBounds awgn{0.3, 0.3, -1.2, -1.2};
  const Complex u(0.1, 0.4);
  const auto r = quantized_output_fn(u, awgn, 0.8, 0.5);
  CHECK(std::abs(r.g - (Complex(0.3, -1.2) - u) / (0.5 + 0.8)) < 1e-14);
  CHECK(r.g_prime == doctest::Approx(1.0 / (0.5 + 0.8)).epsilon(1e-14));

  const auto r2 = quantized_output_fn(u, Complex(0.3, -1.2), 0.8, 0.5, AdcBits::infinite(), 1.0, 1.0);
  CHECK(std::abs(r2.g - r.g) < 1e-15);
}

TEST_CASE("quantized residual matches posterior quadrature") {
  RandomStream rng(12, 1);
  for (int b : {1, 2, 3, 5}) {
    for (int i = 0; i < 25; ++i) {
      const double step = 0.3 + rng.uniform();
      const Complex y(1.5 * rng.normal(), 1.5 * rng.normal());
      const Complex q(quantize_component(y.real(), step, AdcBits(b)), quantize_component(y.imag(), step, AdcBits(b)));
      const CellBounds c = cell_bounds(q, AdcBits(b), step, step);
      const Complex u(y.real() + 0.5 * rng.normal(), y.imag() + 0.5 * rng.normal());
      const double psi = 0.05 + 2 * rng.uniform();
      const double noise = 0.01 + rng.uniform();
      const auto got = quantized_output_fn(u, c, psi, noise);
      const auto ref = oracle_output(u, c, psi, noise);
      CHECK(std::abs(got.g - ref.g) < 1e-6 * std::max(1.0, std::abs(ref.g)));
      CHECK(got.g_prime == doctest::Approx(ref.g_prime).epsilon(1e-6));
      CHECK(std::abs(got.z_mean - ref.z_mean) < 1e-7);
    }
  }
}

TEST_CASE("symmetric cell centred on the prior mean gives zero residual") {
  const CellBounds c{1.0, 2.0, -0.5, 0.5};
  const auto r = quantized_output_fn(Complex(1.5, 0.0), c, 0.7, 0.2);
  CHECK(std::abs(r.g) < 1e-14);
  CHECK(r.g_prime > 0.0);
}

TEST_CASE("one-bit residual at a zero prior mean") {
  const CellBounds c{0.0, kInf, 0.0, kInf};
  const double psi = 0.6, noise = 0.4;
  const auto r = quantized_output_fn(Complex(0, 0), c, psi, noise);
  // E[z | z + w > 0] for z ~ N(0, psi/2), w ~ N(0, noise/2) is
  // (psi/2) * phi(0) / (Phi(0) * sqrt((psi + noise)/2)).
  const double mean = (psi / 2) * oracle::std_normal_pdf(0) / (0.5 * std::sqrt((psi + noise) / 2));
  CHECK(r.g.real() == doctest::Approx(mean / psi).epsilon(1e-12));
  CHECK(r.g.imag() == doctest::Approx(mean / psi).epsilon(1e-12));
}

TEST_CASE("g prime is the negative derivative of g") {
  RandomStream rng(13, 1);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const int b = 1 + static_cast<int>(rng.uniform() * 4);
    const double step = 0.4 + rng.uniform();
    const Complex y(rng.normal(), rng.normal());
    const Complex q(quantize_component(y.real(), step, AdcBits(b)), quantize_component(y.imag(), step, AdcBits(b)));
    const CellBounds c = cell_bounds(q, AdcBits(b), step, step);
    const Complex u(y.real() + 0.4 * rng.normal(), y.imag() + 0.4 * rng.normal());
    const double psi = 0.1 + rng.uniform(), noise = 0.05 + rng.uniform();
    const auto g = [&](Complex uu) { return quantized_output_fn(uu, c, psi, noise).g; };
    const double d_re = (g(u + h).real() - g(u - h).real()) / (2 * h);
    const double d_im = (g(u + Complex(0, h)).imag() - g(u - Complex(0, h)).imag()) / (2 * h);
    CHECK(quantized_output_fn(u, c, psi, noise).g_prime == doctest::Approx(-0.5 * (d_re + d_im)).epsilon(1e-6));
  }
}

TEST_CASE("far tails match high-precision truncated-normal moments") {
  // Posterior means from an 80-digit evaluation of the truncated-normal
  // closed form, for prior variance 0.25 and noise variance 5e-4 per part.
  const CellBounds c{-kInf, 0.0, 2.0, 3.0};
  const struct {
    double off, re, im;
  } ref[] = {{10.0, -0.00491621051141, 1.99680937735},
             {50.0, 0.0948014007, 1.90101438678},
             {400.0, 0.79777819557, 1.19822667904}};
  for (const auto& r : ref) {
    const auto out = quantized_output_fn(Complex(r.off, -r.off), c, 0.5, 1e-3);
    CHECK(out.z_mean.real() == doctest::Approx(r.re).epsilon(1e-7));
    CHECK(out.z_mean.imag() == doctest::Approx(r.im).epsilon(1e-7));
    CHECK(std::isfinite(out.g_prime));
    CHECK(out.z_variance >= 0.0);
  }
}

TEST_CASE("normal tail logarithm") {
  for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0, 8.0})
    CHECK(log_normal_tail(x) == doctest::Approx(std::log(0.5 * std::erfc(x / std::sqrt(2.0)))).epsilon(1e-10));
  for (double x : {40.0, 100.0}) {
    const double asym = -0.5 * x * x - std::log(x * std::sqrt(2 * kPi)) + std::log1p(-1 / (x * x));
    CHECK(log_normal_tail(x) == doctest::Approx(asym).epsilon(1e-6));
  }
}

TEST_CASE("cell bounds reject values off the alphabet") {
  CHECK_THROWS_AS(cell_bounds(Complex(0.5, 0.3), AdcBits(2), 1.0, 1.0), std::invalid_argument);
  const auto c = cell_bounds(Complex(0.5, -1.5), AdcBits(2), 1.0, 1.0);
  CHECK(c.re_lo == 0.0);
  CHECK(c.re_up == 1.0);
  CHECK(std::isinf(c.im_lo));
  CHECK(c.im_up == -1.0);
}
