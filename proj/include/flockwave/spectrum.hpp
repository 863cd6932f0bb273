#pragma once

#include <complex>
#include <vector>

#include "flockwave/coupling.hpp"

namespace flockwave {

using Complex = std::complex<double>;

inline constexpr int kDefaultCurveSamples = 1024;
inline constexpr int kMinCurveSamples = 64;

struct LambdaPair {
  Complex x;
  Complex v;
};

/// Circulant Laplacian eigenvalues at wave number phi.
LambdaPair lambda_at(const ReducedParams& p, double phi);

struct RootPair {
  Complex plus;
  Complex minus;
};

/// Roots of nu^2 - lambda_v nu - lambda_x = 0; `plus` takes the principal
/// square root. The smaller root is recovered from the product to avoid
/// cancellation.
RootPair nu_roots(Complex lambda_x, Complex lambda_v);

struct SpectrumSample {
  double phi = 0.0;
  Complex lambda_x;
  Complex lambda_v;
  Complex nu_plus;
  Complex nu_minus;
};

struct Eigencurves {
  std::vector<SpectrumSample> samples;  // m = 0 .. samples-1
  double spectral_margin = 0.0;         // max Re nu over m != 0
};

/// Samples phi_m = 2 pi m / samples (mapped to (-pi, pi]). Root labels are
/// fixed at m = 1 by the low-frequency convention (nu_+ has the larger
/// imaginary slope) and carried along the curve by continuity.
Eigencurves eigencurves(const ReducedParams& p, int samples = kDefaultCurveSamples);

/// g_v^2 (beta_{v,1} + 2 beta_{v,2})^2 - 2 g_x (4 + 3 alpha_{x,1})
double velocity_discriminant(const ReducedParams& p);

/// nu_pm(phi) ~ i phi B1_pm + phi^2 B2_pm near phi = 0.
struct LowFreqExpansion {
  double B1_plus = 0.0;
  double B1_minus = 0.0;
  double B2_plus = 0.0;
  double B2_minus = 0.0;
};

/// Requires a strictly positive discriminant.
LowFreqExpansion low_freq_expansion(const ReducedParams& p);

/// Signal velocities in agents per unit time; positive points from the leader
/// towards the last agent.
struct SignalVelocities {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double discriminant = 0.0;
};

/// Throws when the discriminant is negative (condition (v) violated).
SignalVelocities signal_velocities(const ReducedParams& p);

}  // namespace flockwave
