#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flockwave/spectrum.hpp"
#include "flockwave/system.hpp"

namespace flockwave {

inline constexpr double kConditionOneTolerance = 1e-10;

/// One necessary condition. `margin` is a signed distance that is >= 0
/// exactly when the condition holds.
struct Condition {
  std::string id;        // "i" .. "vii"
  std::string formula;
  bool satisfied = false;
  double value = 0.0;    // left-hand side
  double margin = 0.0;
};

struct CriteriaReport {
  std::array<Condition, 7> conditions;
  bool overall = false;

  const Condition& operator[](std::size_t i) const { return conditions[i]; }
};

/// Conditions (i)-(vii). `rho` supplies the raw velocity weights used by the
/// averaged Lienard-Chipart condition (vii).
CriteriaReport necessary_criteria(const ReducedParams& p, const CouplingConfig& rho);

/// max Re nu_pm(phi) over sampled phi != 0; negative means circle-stable at
/// this resolution.
double circle_spectral_margin(const ReducedParams& p, int samples = kDefaultCurveSamples);

enum class Verdict { Stable, Unstable, Marginal };
std::string_view to_string(Verdict v);

struct EigenReport {
  int N = 0;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  std::vector<Complex> eigenvalues;
  double max_real = 0.0;
  double zero_tolerance = 0.0;
  int kernel_count = 0;  // eigenvalues with |Re| <= zero_tolerance
  Verdict verdict = Verdict::Marginal;
};

inline constexpr int kDenseEigenCeiling = 800;

/// Full spectrum of M_N by dense nonsymmetric eigensolve (Hessenberg
/// reduction + shifted QR). The default zero tolerance is 1e-8 * ||M_N||_F.
/// Refuses N > kDenseEigenCeiling.
EigenReport line_eigen_stability(const SystemMatrices& m,
                                 std::optional<double> zero_tol = std::nullopt);

enum class SolutionType { TypeI, TypeII, TypeIII, Degenerate };
std::string_view to_string(SolutionType t);

struct Classification {
  SolutionType type = SolutionType::Degenerate;
  double c_plus = 0.0;
  double c_minus = 0.0;
  /// Type I with |c_-| < c_+ (reflections are attenuated).
  bool attenuating = false;
};

inline constexpr double kDefaultClassifyTolerance = 1e-9;

Classification classify(const SignalVelocities& v, double tol = kDefaultClassifyTolerance);

}  // namespace flockwave
