#include "flockwave/coupling.hpp"

#include <cmath>

#include "flockwave/error.hpp"

namespace flockwave {

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::FixedInteraction:
      return "fixed_interaction";
    case BoundaryKind::FixedMass:
      return "fixed_mass";
    case BoundaryKind::Periodic:
      return "periodic";
  }
  return "unknown";
}

BoundaryKind boundary_from_string(std::string_view name) {
  if (name == "fixed_interaction") return BoundaryKind::FixedInteraction;
  if (name == "fixed_mass") return BoundaryKind::FixedMass;
  if (name == "periodic") return BoundaryKind::Periodic;
  throw Error("coupling", "unknown boundary kind '" + std::string(name) +
                              "' (expected fixed_interaction, fixed_mass or periodic)");
}

Stencil::Stencil(const Values& values) : values_(values) {}

Stencil::Stencil(const ExactValues& exact) : exact_(exact) {
  for (std::size_t i = 0; i < kSize; ++i) {
    values_[i] = boost::rational_cast<double>(exact[i]);
  }
}

double Stencil::sum() const {
  // Pairwise from the outside in keeps symmetric cancellations exact.
  return (values_[0] + values_[4]) + (values_[1] + values_[3]) + values_[2];
}

double Stencil::sum_of_squares() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

namespace {

void check_stencil(const Stencil& rho, const char* field, ValidationReport& report) {
  if (const auto& exact = rho.exact()) {
    const Rational center = (*exact)[Stencil::kReach];
    if (center != Rational(1)) {
      report.violations.push_back(
          {field, "center", boost::rational_cast<double>(center - Rational(1)), true});
    }
    Rational total(0);
    for (const auto& r : *exact) total += r;
    if (total != Rational(0)) {
      report.violations.push_back({field, "row_sum", boost::rational_cast<double>(total), true});
    }
    return;
  }
  if (rho[0] != 1.0) report.violations.push_back({field, "center", rho[0] - 1.0, false});
  const double total = rho.sum();
  if (!(std::abs(total) <= kDecentralizationTolerance)) {
    report.violations.push_back({field, "row_sum", total, false});
  }
}

}  // namespace

ValidationReport validate_config(const CouplingConfig& config) {
  ValidationReport report;
  check_stencil(config.rho_x(), "rho_x", report);
  check_stencil(config.rho_v(), "rho_v", report);
  return report;
}

ReducedParams reduce(const CouplingConfig& config) {
  const auto report = validate_config(config);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    throw Error("coupling", "cannot reduce invalid config: " + v.field + " " + v.constraint +
                                " residual " + std::to_string(v.residual));
  }
  ReducedParams p;
  p.g_x = config.g_x();
  p.g_v = config.g_v();
  for (int j = 1; j <= 2; ++j) {
    const auto& rx = config.rho_x();
    const auto& rv = config.rho_v();
    p.alpha_x[j] = rx[j] + rx[-j];
    p.beta_x[j] = rx[j] - rx[-j];
    p.alpha_v[j] = rv[j] + rv[-j];
    p.beta_v[j] = rv[j] - rv[-j];
  }
  return p;
}

namespace {

Stencil stencil_from(const std::array<double, 3>& alpha, const std::array<double, 3>& beta) {
  return Stencil(Stencil::Values{(alpha[2] - beta[2]) / 2.0, (alpha[1] - beta[1]) / 2.0, 1.0,
                                 (alpha[1] + beta[1]) / 2.0, (alpha[2] + beta[2]) / 2.0});
}

}  // namespace

CouplingConfig config_from_reduced(const FreeParameters& f) {
  const std::array<double, 3> alpha_x{1.0, f.alpha_x1, -(1.0 + f.alpha_x1)};
  const std::array<double, 3> beta_x{0.0, f.beta_x1, -f.beta_x1 / 2.0};
  const std::array<double, 3> alpha_v{1.0, f.alpha_v1, -(1.0 + f.alpha_v1)};
  const std::array<double, 3> beta_v{0.0, f.beta_v1, f.beta_v2};
  return CouplingConfig(f.g_x, f.g_v, stencil_from(alpha_x, beta_x), stencil_from(alpha_v, beta_v));
}

FreeParameters free_parameters(const ReducedParams& p) {
  return {p.g_x, p.g_v, p.alpha_x[1], p.beta_x[1], p.alpha_v[1], p.beta_v[1], p.beta_v[2]};
}

CouplingConfig config_from_reduced(const ReducedParams& params) {
  return config_from_reduced(free_parameters(params));
}

void check_spec(const FlockSpec& spec) {
  const auto report = validate_config(spec.config);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    throw Error("coupling", "config." + v.field + ": " + v.constraint + " violated (residual " +
                                std::to_string(v.residual) + ")");
  }
  if (spec.N <= 4) throw Error("coupling", "N: must be > 4, got " + std::to_string(spec.N));
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) {
    throw Error("coupling", "delta: must be finite and >= 0");
  }
  if (!std::isfinite(spec.v0)) throw Error("coupling", "v0: must be finite");
}

}  // namespace flockwave
