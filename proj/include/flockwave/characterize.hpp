#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "flockwave/simulate.hpp"
#include "flockwave/spectrum.hpp"

namespace flockwave {

// Predictions ---------------------------------------------------------------

/// Reflecting damped wave at the last agent (c_- < 0 < c_+).
struct Type1Prediction {
  std::vector<double> amplitudes;  // signed A_1 .. A_kmax
  double period = 0.0;
  double attenuation = 0.0;
};

/// Throws flockwave::Error unless c_- < 0 < c_+.
Type1Prediction predict_type1(const SignalVelocities& v, int N, double v0, int k_max = 3);

/// Reflectionless wave (0 < c_- < c_+).
struct Type2Prediction {
  double amplitude = 0.0;  // signed, -v0 N / c_+
  double T1 = 0.0;
  double T2 = 0.0;
  double ramp_slope = 0.0;  // v0 c_- / (c_+ - c_-)
  double v0 = 0.0;

  /// Piecewise template of z_N(t) - v0 t.
  double template_at(double t) const;
};

/// Throws flockwave::Error unless 0 < c_- < c_+.
Type2Prediction predict_type2(const SignalVelocities& v, int N, double v0);

// Measurements --------------------------------------------------------------

struct Extremum {
  double t = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

/// Strict extrema of d over a centred 5-sample window, refined by a parabola
/// through the three central samples. Extrema with |value| below
/// `floor_fraction * max|d|` are dropped.
std::vector<Extremum> find_extrema(std::span<const double> t, std::span<const double> d,
                                   double floor_fraction = 1e-3);

/// Linearly interpolated sign changes of d at or after sample `from`.
std::vector<double> zero_crossings(std::span<const double> t, std::span<const double> d,
                                   std::size_t from = 0);

struct Type1Measurement {
  std::vector<double> amplitudes;  // signed extremum values A_1, A_2, ...
  double attenuation = 0.0;        // mean |A_{k+1} / A_k| over the first two pairs
  double period = 0.0;             // second zero crossing of d_N after the start
  // Diagnostics.
  std::vector<Extremum> extrema;
  std::vector<double> ratios;
  std::vector<double> crossings;
  double period_from_extrema = 0.0;  // t(E_3) - t(E_1)
};

/// Throws flockwave::Error on fewer than three extrema, non-alternating
/// extrema, or fewer than two zero crossings.
Type1Measurement measure_type1(const Signal& s);
Type1Measurement measure_type1(const Trajectory& tr);

/// Continuous three-segment linear least-squares fit with breakpoints b1 < b2.
struct PiecewiseFit {
  double b1 = 0.0;
  double b2 = 0.0;
  double rms = 0.0;
  std::array<double, 4> coefficients{};  // 1, t, (t-b1)+, (t-b2)+

  double value_at(double t) const;
};

PiecewiseFit fit_three_segments(std::span<const double> t, std::span<const double> d, double b1,
                                double b2);
PiecewiseFit fit_three_segments_blind(std::span<const double> t, std::span<const double> d);

struct Type2Measurement {
  double amplitude = 0.0;  // signed minimum of d_N
  double T1 = 0.0;         // |amplitude| / v0
  double T2 = 0.0;         // t_min + |amplitude| / ramp_slope
  // Diagnostics.
  double t_min = 0.0;
  double ramp_slope = 0.0;
  std::size_t ramp_points = 0;
  PiecewiseFit blind_fit;
  std::optional<PiecewiseFit> seeded_fit;
};

inline constexpr double kShapeMismatchFraction = 0.05;

/// Throws flockwave::Error when no ramp can be found or when the blind
/// three-segment fit leaves an rms residual above kShapeMismatchFraction * |A|.
Type2Measurement measure_type2(const Signal& s,
                               const std::optional<Type2Prediction>& seed = std::nullopt);
Type2Measurement measure_type2(const Trajectory& tr,
                               const std::optional<Type2Prediction>& seed = std::nullopt);

/// |measured - predicted| / |predicted|; throws on a zero prediction.
double relative_error(double measured, double predicted);

struct Type1Errors {
  double A1 = 0.0;
  double attenuation = 0.0;
  double period = 0.0;
};

struct Type2Errors {
  double A = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
};

Type1Errors relative_errors(const Type1Measurement& m, const Type1Prediction& p);
Type2Errors relative_errors(const Type2Measurement& m, const Type2Prediction& p);

}  // namespace flockwave
