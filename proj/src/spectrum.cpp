#include "flockwave/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "flockwave/error.hpp"

namespace flockwave {

LambdaPair lambda_at(const ReducedParams& p, double phi) {
  Complex sx(0.0, 0.0);
  Complex sv(0.0, 0.0);
  for (int j = 0; j <= 2; ++j) {
    const double c = std::cos(j * phi);
    const double s = std::sin(j * phi);
    sx += Complex(p.alpha_x[j] * c, p.beta_x[j] * s);
    sv += Complex(p.alpha_v[j] * c, p.beta_v[j] * s);
  }
  return {p.g_x * sx, p.g_v * sv};
}

RootPair nu_roots(Complex lambda_x, Complex lambda_v) {
  const Complex root = std::sqrt(lambda_v * lambda_v + 4.0 * lambda_x);
  // Add the square root with the sign that does not cancel against lambda_v.
  const bool flip = std::real(std::conj(lambda_v) * root) < 0.0;
  const Complex large = 0.5 * (lambda_v + (flip ? -root : root));
  const Complex small = large == Complex(0.0, 0.0) ? 0.5 * (lambda_v - (flip ? -root : root))
                                                    : -lambda_x / large;
  return flip ? RootPair{small, large} : RootPair{large, small};
}

Eigencurves eigencurves(const ReducedParams& p, int samples) {
  if (samples < kMinCurveSamples) {
    throw Error("spectrum", "eigencurves needs at least " + std::to_string(kMinCurveSamples) +
                                " samples, got " + std::to_string(samples));
  }
  Eigencurves out;
  out.samples.reserve(static_cast<std::size_t>(samples));
  out.spectral_margin = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < samples; ++m) {
    double phi = 2.0 * std::numbers::pi * m / samples;
    if (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    const auto lam = lambda_at(p, phi);
    auto roots = nu_roots(lam.x, lam.v);
    if (m == 1) {
      if (std::imag(roots.plus) < std::imag(roots.minus)) std::swap(roots.plus, roots.minus);
    } else if (m > 1) {
      const auto& prev = out.samples.back();
      const double keep = std::abs(roots.plus - prev.nu_plus) + std::abs(roots.minus - prev.nu_minus);
      const double swap = std::abs(roots.plus - prev.nu_minus) + std::abs(roots.minus - prev.nu_plus);
      if (swap < keep) std::swap(roots.plus, roots.minus);
    }
    out.samples.push_back({phi, lam.x, lam.v, roots.plus, roots.minus});
    if (m != 0) {
      out.spectral_margin =
          std::max({out.spectral_margin, std::real(roots.plus), std::real(roots.minus)});
    }
  }
  return out;
}

double velocity_discriminant(const ReducedParams& p) {
  const double skew = p.g_v * p.velocity_skew();
  return skew * skew - 2.0 * p.g_x * (4.0 + 3.0 * p.alpha_x[1]);
}

LowFreqExpansion low_freq_expansion(const ReducedParams& p) {
  const double disc = velocity_discriminant(p);
  if (!(disc > 0.0)) {
    std::ostringstream msg;
    msg << "low-frequency expansion needs a positive discriminant, got " << disc;
    throw Error("spectrum", msg.str());
  }
  const double root = std::sqrt(disc);
  const double b = p.velocity_skew();
  const double a_v = 4.0 + 3.0 * p.alpha_v[1];
  const double first = p.g_v * b;
  const double second = (p.g_v * p.g_v * b * a_v + 2.0 * p.g_x * p.beta_x[1]) / root;
  LowFreqExpansion e;
  e.B1_plus = 0.5 * (first + root);
  e.B1_minus = 0.5 * (first - root);
  e.B2_plus = 0.25 * (p.g_v * a_v + second);
  e.B2_minus = 0.25 * (p.g_v * a_v - second);
  return e;
}

SignalVelocities signal_velocities(const ReducedParams& p) {
  const double disc = velocity_discriminant(p);
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "signal velocities undefined: condition (v) violated, discriminant " << disc << " < 0";
    throw Error("spectrum", msg.str());
  }
  const double mean = -0.5 * p.g_v * p.velocity_skew();
  const double half = 0.5 * std::sqrt(disc);
  return {mean + half, mean - half, disc};
}

}  // namespace flockwave
