#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flockwave/error.hpp"
#include "flockwave/spectrum.hpp"
#include "support.hpp"

using namespace flockwave;
namespace t = flockwave::testing;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("lambda at phi = 0 vanishes and nu has a double zero root") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto p = reduce(t::random_config(rng));
    const auto l = lambda_at(p, 0.0);
    CHECK(std::abs(l.x) <= 1e-12);
    CHECK(std::abs(l.v) <= 1e-12);
    // A row-sum residual eps splits the double root by about sqrt(eps).
    const double bound = 2.0 * std::sqrt(std::abs(l.x)) + std::abs(l.v) + 1e-300;
    const auto curves = eigencurves(p, 1024);
    CHECK(std::abs(curves.samples[0].nu_plus) <= bound);
    CHECK(std::abs(curves.samples[0].nu_minus) <= bound);
  }
  // Weights that are exact in binary give exact zeros.
  for (const auto& spec : {t::fig6(), t::fig7(), t::fig8()}) {
    const auto s0 = eigencurves(reduce(spec.config), 1024).samples[0];
    CHECK(s0.nu_plus == Complex(0.0, 0.0));
    CHECK(s0.nu_minus == Complex(0.0, 0.0));
  }
}

TEST_CASE("lambda matches the direct Fourier sum") {
  const auto spec = t::fig4();
  const auto p = reduce(spec.config);
  for (double phi : {0.1, 1.0, 2.5, -3.0}) {
    Complex x = 0.0, v = 0.0;
    for (int j = -2; j <= 2; ++j) {
      x += spec.config.g_x() * spec.config.rho_x()[j] * std::polar(1.0, phi * j);
      v += spec.config.g_v() * spec.config.rho_v()[j] * std::polar(1.0, phi * j);
    }
    const auto l = lambda_at(p, phi);
    CHECK(rel(l.x, x) <= 1e-13);
    CHECK(rel(l.v, v) <= 1e-13);
  }
}

TEST_CASE("root sum and product identities on a 1024-point grid") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto p = reduce(t::random_config(rng));
    const auto curves = eigencurves(p, 1024);
    REQUIRE(curves.samples.size() == 1024);
    for (const auto& s : curves.samples) {
      const double scale_sum = std::max({std::abs(s.lambda_v), std::abs(s.nu_plus), 1e-300});
      const double scale_prod = std::max({std::abs(s.lambda_x), std::abs(s.nu_plus * s.nu_minus), 1e-300});
      CHECK(std::abs(s.nu_plus + s.nu_minus - s.lambda_v) <= 1e-10 * scale_sum);
      CHECK(std::abs(s.nu_plus * s.nu_minus + s.lambda_x) <= 1e-10 * scale_prod);
    }
  }
}

TEST_CASE("conjugate symmetry nu(-phi) = conj nu(phi)") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto p = reduce(t::random_config(rng));
    for (double phi : {0.3, 1.1, 2.9}) {
      const auto a = lambda_at(p, phi);
      const auto b = lambda_at(p, -phi);
      const auto ra = nu_roots(a.x, a.v);
      const auto rb = nu_roots(b.x, b.v);
      // Compare as unordered pairs.
      const double d1 = std::abs(ra.plus - std::conj(rb.plus)) + std::abs(ra.minus - std::conj(rb.minus));
      const double d2 = std::abs(ra.plus - std::conj(rb.minus)) + std::abs(ra.minus - std::conj(rb.plus));
      CHECK(std::min(d1, d2) <= 1e-10 * (1.0 + std::abs(ra.plus) + std::abs(ra.minus)));
    }
  }
}

TEST_CASE("eigencurve labels follow the low-frequency convention") {
  const auto p = reduce(t::fig6().config);
  const auto curves = eigencurves(p, 1024);
  const auto& s1 = curves.samples[1];
  CHECK(s1.nu_plus.imag() > s1.nu_minus.imag());
  CHECK(curves.spectral_margin < 0.0);
  CHECK(curves.samples[512].phi == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(eigencurves(p, kMinCurveSamples - 1), Error);
}

TEST_CASE("signal velocities of the reference examples") {
  const auto v6 = signal_velocities(reduce(t::fig6().config));
  CHECK(v6.c_plus == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(v6.c_minus == doctest::Approx(-1.0).epsilon(1e-12));

  const auto v7 = signal_velocities(reduce(t::fig7().config));
  CHECK(v7.c_plus == doctest::Approx(2.5 + std::sqrt(17.0) / 2).epsilon(1e-12));
  CHECK(v7.c_minus == doctest::Approx(2.5 - std::sqrt(17.0) / 2).epsilon(1e-12));

  const auto v4 = signal_velocities(reduce(t::fig4().config));
  CHECK(v4.discriminant == doctest::Approx(145.0 / 18.0).epsilon(1e-12));
  CHECK(v4.c_plus == doctest::Approx(-4.0 / 3 + 0.5 * std::sqrt(145.0 / 18)).epsilon(1e-12));
  CHECK(v4.c_minus == doctest::Approx(-4.0 / 3 - 0.5 * std::sqrt(145.0 / 18)).epsilon(1e-12));

  // Discriminant 0.75^2 * 4 - 2 (-2)(4 - 1.5) = 12.25.
  CHECK(velocity_discriminant(reduce(t::fig6().config)) == doctest::Approx(12.25));
}

TEST_CASE("negative discriminant is reported as condition (v)") {
  // alpha_x1 = -2 makes 4 + 3 alpha_x1 < 0; with g_x < 0 the discriminant is negative.
  const auto c = config_from_reduced(FreeParameters{-2, -2, -2, 0, -0.5, 0, 0});
  const auto p = reduce(c);
  REQUIRE(velocity_discriminant(p) < 0.0);
  try {
    signal_velocities(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(v)") != std::string::npos);
  }
  CHECK_THROWS_AS(low_freq_expansion(p), Error);
}

TEST_CASE("low-frequency coefficients against finite differences") {
  std::mt19937_64 rng(14);
  int checked = 0;
  while (checked < 50) {
    const auto p = reduce(t::random_reduced_config(rng));
    if (velocity_discriminant(p) < 0.5) continue;
    ++checked;
    const auto b = low_freq_expansion(p);
    const auto v = signal_velocities(p);
    CHECK(v.c_plus == doctest::Approx(-b.B1_minus).epsilon(1e-10));
    CHECK(v.c_minus == doctest::Approx(-b.B1_plus).epsilon(1e-10));

    // Im nu(h) / h -> B1 at h = 1e-4; smaller h loses digits to cancellation in lambda.
    const double h = 1e-4;
    const auto l = lambda_at(p, h);
    const auto r = nu_roots(l.x, l.v);
    for (double B1 : {b.B1_plus, b.B1_minus}) {
      const Complex target(0.0, h * B1);
      const Complex root = std::abs(r.plus - target) < std::abs(r.minus - target) ? r.plus : r.minus;
      CHECK(std::abs(root.imag() / h - B1) <= 1e-4 * std::max(1.0, std::abs(B1)));
    }

    // Re nu(h) / h^2 -> B2 at h = 1e-3 (Re nu is even in phi).
    const double h2 = 1e-3;
    const auto l2 = lambda_at(p, h2);
    const auto r2 = nu_roots(l2.x, l2.v);
    for (auto [B1, B2] : {std::pair{b.B1_plus, b.B2_plus}, std::pair{b.B1_minus, b.B2_minus}}) {
      const Complex target(0.0, h2 * B1);
      const Complex root = std::abs(r2.plus - target) < std::abs(r2.minus - target) ? r2.plus : r2.minus;
      CHECK(std::abs(root.real() / (h2 * h2) - B2) <= 1e-3 * std::max(1.0, std::abs(B2)));
    }
  }
}
