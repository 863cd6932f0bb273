#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace flockwave {

using Rational = boost::rational<std::int64_t>;

enum class BoundaryKind { FixedInteraction, FixedMass, Periodic };

std::string_view to_string(BoundaryKind kind);
BoundaryKind boundary_from_string(std::string_view name);

/// Coupling weights for offsets -2..2 around an agent, stored in the order
/// (rho_{-2}, rho_{-1}, rho_0, rho_1, rho_2). When the weights were read from
/// exact rational text the rationals are kept alongside the doubles.
class Stencil {
 public:
  static constexpr int kReach = 2;
  static constexpr std::size_t kSize = 2 * kReach + 1;
  using Values = std::array<double, kSize>;
  using ExactValues = std::array<Rational, kSize>;

  Stencil() = default;
  explicit Stencil(const Values& values);
  explicit Stencil(const ExactValues& exact);

  double operator[](int offset) const { return values_[static_cast<std::size_t>(offset + kReach)]; }
  const Values& values() const { return values_; }
  const std::optional<ExactValues>& exact() const { return exact_; }

  double sum() const;
  double sum_of_squares() const;

  friend bool operator==(const Stencil&, const Stencil&) = default;

 private:
  Values values_{};
  std::optional<ExactValues> exact_;
};

/// The ten-tuple (g_x, g_v, rho_x, rho_v) with rho_{x,0} = rho_{v,0} = 1.
class CouplingConfig {
 public:
  CouplingConfig() = default;
  CouplingConfig(double g_x, double g_v, Stencil rho_x, Stencil rho_v)
      : g_x_(g_x), g_v_(g_v), rho_x_(std::move(rho_x)), rho_v_(std::move(rho_v)) {}

  double g_x() const { return g_x_; }
  double g_v() const { return g_v_; }
  const Stencil& rho_x() const { return rho_x_; }
  const Stencil& rho_v() const { return rho_v_; }

  friend bool operator==(const CouplingConfig&, const CouplingConfig&) = default;

 private:
  double g_x_ = 0.0;
  double g_v_ = 0.0;
  Stencil rho_x_;
  Stencil rho_v_;
};

inline constexpr double kDecentralizationTolerance = 1e-12;

struct Violation {
  std::string field;       // "rho_x", "rho_v"
  std::string constraint;  // "center" or "row_sum"
  double residual = 0.0;
  bool exact = false;      // checked with exact rational arithmetic
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Checks rho_0 = 1 and the vanishing row sums. Never throws.
ValidationReport validate_config(const CouplingConfig& config);

/// alpha_j = rho_j + rho_{-j}, beta_j = rho_j - rho_{-j}; index 0 fixed at (1, 0).
struct ReducedParams {
  double g_x = 0.0;
  double g_v = 0.0;
  std::array<double, 3> alpha_x{1.0, 0.0, 0.0};
  std::array<double, 3> beta_x{0.0, 0.0, 0.0};
  std::array<double, 3> alpha_v{1.0, 0.0, 0.0};
  std::array<double, 3> beta_v{0.0, 0.0, 0.0};

  /// beta_{v,1} + 2 beta_{v,2}, the combination driving the signal velocities.
  double velocity_skew() const { return beta_v[1] + 2.0 * beta_v[2]; }
};

/// Throws flockwave::Error for an invalid config.
ReducedParams reduce(const CouplingConfig& config);

/// The free coordinates left after eliminating beta_{x,2}, alpha_{x,2} and
/// alpha_{v,2}.
struct FreeParameters {
  double g_x = 0.0;
  double g_v = 0.0;
  double alpha_x1 = 0.0;
  double beta_x1 = 0.0;
  double alpha_v1 = 0.0;
  double beta_v1 = 0.0;
  double beta_v2 = 0.0;
};

/// Fills beta_{x,2} = -beta_{x,1}/2, alpha_{x,2} = -(1 + alpha_{x,1}),
/// alpha_{v,2} = -(1 + alpha_{v,1}) and inverts the reduction.
CouplingConfig config_from_reduced(const FreeParameters& free);
CouplingConfig config_from_reduced(const ReducedParams& params);

FreeParameters free_parameters(const ReducedParams& params);

struct FlockSpec {
  CouplingConfig config;
  int N = 0;
  double delta = 1.0;
  double v0 = 1.0;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;

  friend bool operator==(const FlockSpec&, const FlockSpec&) = default;
};

/// Throws flockwave::Error naming the offending field.
void check_spec(const FlockSpec& spec);

}  // namespace flockwave
