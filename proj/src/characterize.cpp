#include "flockwave/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "flockwave/error.hpp"

namespace flockwave {

Type1Prediction predict_type1(const SignalVelocities& v, int N, double v0, int k_max) {
  if (!(v.c_minus < 0.0 && v.c_plus > 0.0)) {
    throw Error("characterize", "Type I prediction needs c_- < 0 < c_+");
  }
  Type1Prediction p;
  const double ratio = v.c_minus / v.c_plus;
  double a = -v0 * N / v.c_plus;
  for (int k = 1; k <= k_max; ++k) {
    p.amplitudes.push_back(a);
    a *= ratio;
  }
  p.attenuation = std::abs(ratio);
  p.period = 2.0 * N * (1.0 / v.c_plus - 1.0 / v.c_minus);
  return p;
}

Type2Prediction predict_type2(const SignalVelocities& v, int N, double v0) {
  if (!(v.c_minus > 0.0 && v.c_plus > v.c_minus)) {
    throw Error("characterize", "Type II prediction needs 0 < c_- < c_+");
  }
  Type2Prediction p;
  p.v0 = v0;
  p.amplitude = -v0 * N / v.c_plus;
  p.T1 = N / v.c_plus;
  p.T2 = N / v.c_minus;
  p.ramp_slope = v0 * v.c_minus / (v.c_plus - v.c_minus);
  return p;
}

double Type2Prediction::template_at(double t) const {
  if (t < T1) return -v0 * t;
  if (t < T2) return -v0 * T1 + ramp_slope * (t - T1);
  return 0.0;
}

std::vector<Extremum> find_extrema(std::span<const double> t, std::span<const double> d,
                                   double floor_fraction) {
  std::vector<Extremum> out;
  const std::size_t n = d.size();
  if (n < 5) return out;
  double peak = 0.0;
  for (double v : d) peak = std::max(peak, std::abs(v));
  const double floor = floor_fraction * peak;

  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double c = d[i];
    const bool is_max = c > d[i - 2] && c > d[i - 1] && c > d[i + 1] && c > d[i + 2];
    const bool is_min = c < d[i - 2] && c < d[i - 1] && c < d[i + 1] && c < d[i + 2];
    if (!is_max && !is_min) continue;
    if (std::abs(c) < floor) continue;
    // Parabola through the three central samples (uniform spacing assumed).
    const double curvature = d[i - 1] - 2.0 * c + d[i + 1];
    double shift = 0.0;
    if (curvature != 0.0) shift = 0.5 * (d[i - 1] - d[i + 1]) / curvature;
    shift = std::clamp(shift, -1.0, 1.0);
    const double h = shift >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
    const double value = c - 0.25 * (d[i - 1] - d[i + 1]) * shift;
    out.push_back({t[i] + shift * h, value, i});
  }
  return out;
}

std::vector<double> zero_crossings(std::span<const double> t, std::span<const double> d,
                                   std::size_t from) {
  std::vector<double> out;
  for (std::size_t i = std::max<std::size_t>(from, 1); i < d.size(); ++i) {
    const double a = d[i - 1];
    const double b = d[i];
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      out.push_back(t[i - 1] + (t[i] - t[i - 1]) * a / (a - b));
    }
  }
  return out;
}

Type1Measurement measure_type1(const Signal& s) {
  Type1Measurement m;
  m.extrema = find_extrema(s.t, s.d);
  if (m.extrema.size() < 3) {
    throw Error("characterize", "insufficient extrema: found " + std::to_string(m.extrema.size()) +
                                    ", need 3");
  }
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    if ((m.extrema[k].value < 0.0) == (m.extrema[k + 1].value < 0.0)) {
      std::ostringstream msg;
      msg << "non-alternating extrema at t = " << m.extrema[k].t << " and " << m.extrema[k + 1].t;
      throw Error("characterize", msg.str());
    }
  }
  for (const auto& e : m.extrema) m.amplitudes.push_back(e.value);
  for (std::size_t k = 0; k < 2; ++k) {
    m.ratios.push_back(std::abs(m.extrema[k + 1].value / m.extrema[k].value));
  }
  m.attenuation = 0.5 * (m.ratios[0] + m.ratios[1]);
  m.period_from_extrema = m.extrema[2].t - m.extrema[0].t;

  m.crossings = zero_crossings(s.t, s.d, m.extrema[0].index);
  if (m.crossings.size() < 2) {
    throw Error("characterize", "need two zero crossings after the first extremum, found " +
                                    std::to_string(m.crossings.size()));
  }
  m.period = m.crossings[1];
  return m;
}

Type1Measurement measure_type1(const Trajectory& tr) { return measure_type1(last_agent_signal(tr)); }

double PiecewiseFit::value_at(double t) const {
  return coefficients[0] + coefficients[1] * t + coefficients[2] * std::max(0.0, t - b1) +
         coefficients[3] * std::max(0.0, t - b2);
}

PiecewiseFit fit_three_segments(std::span<const double> t, std::span<const double> d, double b1,
                                double b2) {
  if (b1 > b2) std::swap(b1, b2);
  Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Eigen::Vector4d row(1.0, t[i], std::max(0.0, t[i] - b1), std::max(0.0, t[i] - b2));
    normal.noalias() += row * row.transpose();
    rhs.noalias() += row * d[i];
  }
  const Eigen::Vector4d c = normal.completeOrthogonalDecomposition().solve(rhs);
  PiecewiseFit fit;
  fit.b1 = b1;
  fit.b2 = b2;
  fit.coefficients = {c[0], c[1], c[2], c[3]};
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = d[i] - fit.value_at(t[i]);
    sse += r * r;
  }
  fit.rms = t.empty() ? 0.0 : std::sqrt(sse / static_cast<double>(t.size()));
  return fit;
}

namespace {

// Hooke-Jeeves pattern search over (b1, b2) with b1 < b2 inside [lo, hi].
PiecewiseFit refine(std::span<const double> t, std::span<const double> d, PiecewiseFit best,
                    double step, double lo, double hi) {
  const double min_step = 1e-6 * std::max(1.0, hi - lo);
  while (step > min_step) {
    bool improved = false;
    for (const auto& [db1, db2] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double b1 = best.b1 + db1;
      const double b2 = best.b2 + db2;
      if (b1 < lo || b2 > hi || b1 >= b2) continue;
      const auto trial = fit_three_segments(t, d, b1, b2);
      if (trial.rms < best.rms) {
        best = trial;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

PiecewiseFit fit_three_segments_blind(std::span<const double> t, std::span<const double> d) {
  if (t.size() < 4) throw Error("characterize", "three-segment fit needs at least 4 samples");
  const double lo = t.front();
  const double hi = t.back();
  constexpr int kGrid = 48;
  const double h = (hi - lo) / kGrid;
  PiecewiseFit best;
  best.rms = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGrid; ++i) {
    for (int j = i + 1; j < kGrid; ++j) {
      const auto trial = fit_three_segments(t, d, lo + i * h, lo + j * h);
      if (trial.rms < best.rms) best = trial;
    }
  }
  return refine(t, d, best, 0.5 * h, lo, hi);
}

Type2Measurement measure_type2(const Signal& s, const std::optional<Type2Prediction>& seed) {
  if (s.v0 == 0.0) throw Error("characterize", "Type II measurement needs a moving leader");
  if (s.d.size() < 5) throw Error("characterize", "signal too short");
  Type2Measurement m;
  const auto it = std::min_element(s.d.begin(), s.d.end());
  auto i_min = static_cast<std::size_t>(it - s.d.begin());
  m.t_min = s.t[i_min];
  m.amplitude = *it;
  if (i_min > 0 && i_min + 1 < s.d.size()) {
    const double curvature = s.d[i_min - 1] - 2.0 * s.d[i_min] + s.d[i_min + 1];
    if (curvature > 0.0) {
      const double shift = std::clamp(0.5 * (s.d[i_min - 1] - s.d[i_min + 1]) / curvature, -1.0, 1.0);
      m.t_min += shift * (shift >= 0.0 ? s.t[i_min + 1] - s.t[i_min] : s.t[i_min] - s.t[i_min - 1]);
      m.amplitude -= 0.25 * (s.d[i_min - 1] - s.d[i_min + 1]) * shift;
    }
  }
  const double depth = -m.amplitude;
  if (!(depth > 0.0)) throw Error("characterize", "no negative excursion of d_N found");
  m.T1 = depth / std::abs(s.v0);

  // Recovery ramp: samples after the minimum between 80% and 20% of the depth.
  double st = 0.0, sd = 0.0, stt = 0.0, std_ = 0.0;
  std::size_t count = 0;
  for (std::size_t i = i_min; i < s.d.size(); ++i) {
    if (s.d[i] < -0.8 * depth) continue;
    if (s.d[i] > -0.2 * depth) break;
    st += s.t[i];
    sd += s.d[i];
    stt += s.t[i] * s.t[i];
    std_ += s.t[i] * s.d[i];
    ++count;
  }
  if (count < 2) throw Error("characterize", "recovery ramp not resolved after the minimum");
  const double n = static_cast<double>(count);
  const double denom = n * stt - st * st;
  m.ramp_slope = (n * std_ - st * sd) / denom;
  m.ramp_points = count;
  if (!(m.ramp_slope > 0.0)) throw Error("characterize", "recovery ramp is not rising");
  m.T2 = m.t_min + depth / m.ramp_slope;

  m.blind_fit = fit_three_segments_blind(s.t, s.d);
  if (seed) {
    const auto start = fit_three_segments(s.t, s.d, seed->T1, seed->T2);
    const double span = s.t.back() - s.t.front();
    m.seeded_fit = refine(s.t, s.d, start, span / 96.0, s.t.front(), s.t.back());
  }
  if (m.blind_fit.rms > kShapeMismatchFraction * depth) {
    std::ostringstream msg;
    msg << "shape mismatch: three-segment fit rms " << m.blind_fit.rms << " exceeds "
        << kShapeMismatchFraction << " of |A| = " << depth;
    throw Error("characterize", msg.str());
  }
  return m;
}

Type2Measurement measure_type2(const Trajectory& tr, const std::optional<Type2Prediction>& seed) {
  return measure_type2(last_agent_signal(tr), seed);
}

double relative_error(double measured, double predicted) {
  if (predicted == 0.0) throw Error("characterize", "relative error undefined for a zero prediction");
  return std::abs(measured - predicted) / std::abs(predicted);
}

Type1Errors relative_errors(const Type1Measurement& m, const Type1Prediction& p) {
  return {relative_error(std::abs(m.amplitudes.at(0)), std::abs(p.amplitudes.at(0))),
          relative_error(m.attenuation, p.attenuation), relative_error(m.period, p.period)};
}

Type2Errors relative_errors(const Type2Measurement& m, const Type2Prediction& p) {
  return {relative_error(std::abs(m.amplitude), std::abs(p.amplitude)), relative_error(m.T1, p.T1),
          relative_error(m.T2, p.T2)};
}

}  // namespace flockwave
