#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flockwave/coupling.hpp"

namespace flockwave {

/// N x N Laplacian with bandwidth 2. Line systems drop entries that fall
/// outside 1..N; periodic systems wrap them around.
class BandedLaplacian {
 public:
  BandedLaplacian() = default;
  BandedLaplacian(int n, bool periodic);

  int size() const { return n_; }
  bool periodic() const { return periodic_; }

  /// Weight on agent row+offset in the equation of agent `row` (0-based).
  double& at(int row, int offset) { return band_[static_cast<std::size_t>(row)][offset + 2]; }
  double at(int row, int offset) const { return band_[static_cast<std::size_t>(row)][offset + 2]; }

  /// Column index of row+offset, or -1 when it falls outside a line system.
  int column(int row, int offset) const;

  double row_sum(int row) const;

  /// y = L x
  void apply(std::span<const double> x, std::span<double> y) const;
  /// y += L x
  void apply_add(std::span<const double> x, std::span<double> y) const;

  Eigen::MatrixXd dense() const;

 private:
  int n_ = 0;
  bool periodic_ = false;
  std::vector<std::array<double, 5>> band_;
};

/// Coefficients multiplying z_0(t) and zdot_0(t) in the equations of agents
/// 1 and 2 (index 0 and 1).
struct ForceRecipe {
  std::array<double, 2> position{0.0, 0.0};
  std::array<double, 2> velocity{0.0, 0.0};
};

struct SystemMatrices {
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  BandedLaplacian L_x;
  BandedLaplacian L_v;
  ForceRecipe force;

  int N() const { return L_x.size(); }

  /// The 2N x 2N matrix [[0, I], [L_x, L_v]].
  Eigen::MatrixXd first_order() const;

  /// Total leader weight in the equation of agent `row` (0-based), split by
  /// position and velocity Laplacian.
  double leader_weight_x(int row) const { return row < 2 ? force.position[row] : 0.0; }
  double leader_weight_v(int row) const { return row < 2 ? force.velocity[row] : 0.0; }
};

/// Throws flockwave::Error when N <= 4 or the config is invalid.
SystemMatrices build_system(const FlockSpec& spec);

/// External force F(t): zero except the acceleration components of agents 1
/// and 2, evaluated with z_0(t) = v0 t and zdot_0(t) = v0.
std::vector<double> leader_force(const FlockSpec& spec, const SystemMatrices& m, double t);

}  // namespace flockwave
