#include "flockwave/system.hpp"

#include "flockwave/error.hpp"

namespace flockwave {

BandedLaplacian::BandedLaplacian(int n, bool periodic)
    : n_(n), periodic_(periodic), band_(static_cast<std::size_t>(n), std::array<double, 5>{}) {}

int BandedLaplacian::column(int row, int offset) const {
  const int c = row + offset;
  if (periodic_) return ((c % n_) + n_) % n_;
  return (c < 0 || c >= n_) ? -1 : c;
}

double BandedLaplacian::row_sum(int row) const {
  double s = 0.0;
  for (int j = -2; j <= 2; ++j) {
    if (column(row, j) >= 0) s += at(row, j);
  }
  return s;
}

void BandedLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  for (int k = 0; k < n_; ++k) y[k] = 0.0;
  apply_add(x, y);
}

void BandedLaplacian::apply_add(std::span<const double> x, std::span<double> y) const {
  const int n = n_;
  auto edge_row = [&](int k) {
    double acc = 0.0;
    for (int j = -2; j <= 2; ++j) {
      const int c = column(k, j);
      if (c >= 0) acc += at(k, j) * x[c];
    }
    y[k] += acc;
  };
  edge_row(0);
  edge_row(1);
  for (int k = 2; k < n - 2; ++k) {
    const auto& w = band_[static_cast<std::size_t>(k)];
    y[k] += w[0] * x[k - 2] + w[1] * x[k - 1] + w[2] * x[k] + w[3] * x[k + 1] + w[4] * x[k + 2];
  }
  edge_row(n - 2);
  edge_row(n - 1);
}

Eigen::MatrixXd BandedLaplacian::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  for (int k = 0; k < n_; ++k) {
    for (int j = -2; j <= 2; ++j) {
      const int c = column(k, j);
      if (c >= 0) out(k, c) += at(k, j);
    }
  }
  return out;
}

Eigen::MatrixXd SystemMatrices::first_order() const {
  const int n = N();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n).setIdentity();
  m.bottomLeftCorner(n, n) = L_x.dense();
  m.bottomRightCorner(n, n) = L_v.dense();
  return m;
}

namespace {

// Fills one Laplacian (gain g, weights rho) and returns the leader weights
// for agents 1 and 2.
std::array<double, 2> assemble(BandedLaplacian& L, double g, const Stencil& rho, BoundaryKind kind) {
  const int n = L.size();
  for (int k = 0; k < n; ++k) {
    for (int j = -2; j <= 2; ++j) {
      if (kind == BoundaryKind::Periodic || L.column(k, j) >= 0) L.at(k, j) = g * rho[j];
    }
  }
  if (kind == BoundaryKind::Periodic) return {0.0, 0.0};

  const int last = n - 1;
  if (kind == BoundaryKind::FixedInteraction) {
    // Missing neighbours are dropped and the self weight balances the rest.
    L.at(0, 0) = -g * (rho[-1] + rho[1] + rho[2]);
    L.at(last - 1, 0) = -g * (rho[-2] + rho[-1] + rho[1]);
    L.at(last, 0) = -g * (rho[-2] + rho[-1]);
    return {g * rho[-1], g * rho[-2]};
  }
  // Fixed mass: missing weights are lumped onto the nearest existing agent.
  L.at(last - 1, 1) = g * (rho[1] + rho[2]);
  L.at(last, 0) = g * (rho[0] + rho[1] + rho[2]);
  return {g * (rho[-2] + rho[-1]), g * rho[-2]};
}

}  // namespace

SystemMatrices build_system(const FlockSpec& spec) {
  check_spec(spec);
  const bool periodic = spec.boundary == BoundaryKind::Periodic;
  SystemMatrices m;
  m.boundary = spec.boundary;
  m.L_x = BandedLaplacian(spec.N, periodic);
  m.L_v = BandedLaplacian(spec.N, periodic);
  const auto fx = assemble(m.L_x, spec.config.g_x(), spec.config.rho_x(), spec.boundary);
  const auto fv = assemble(m.L_v, spec.config.g_v(), spec.config.rho_v(), spec.boundary);
  m.force.position = fx;
  m.force.velocity = fv;
  return m;
}

std::vector<double> leader_force(const FlockSpec& spec, const SystemMatrices& m, double t) {
  const int n = m.N();
  std::vector<double> f(static_cast<std::size_t>(2 * n), 0.0);
  const double z0 = spec.v0 * t;
  const double zdot0 = spec.v0;
  for (int a = 0; a < 2; ++a) {
    f[static_cast<std::size_t>(n + a)] = m.force.position[a] * z0 + m.force.velocity[a] * zdot0;
  }
  return f;
}

}  // namespace flockwave
