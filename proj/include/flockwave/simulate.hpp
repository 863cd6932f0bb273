#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flockwave/system.hpp"

namespace flockwave {

enum class IntegratorMethod { RungeKutta4, DormandPrince45 };
std::string_view to_string(IntegratorMethod m);

struct IntegratorOptions {
  IntegratorMethod method = IntegratorMethod::DormandPrince45;
  double dt = 0.01;        // fixed step for RK4, initial step for the adaptive run
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double t_max = 0.0;
  double output_interval = 0.0;  // 0 selects t_max / kDefaultOutputSamples
  double overflow_limit = 1e12;

  static constexpr int kDefaultOutputSamples = 4096;

  double effective_output_interval() const;
  /// Throws flockwave::Error on non-positive steps, tolerances or horizon.
  void check() const;
};

/// Initial deviation from the zero state; used for periodic perturbation runs.
struct InitialState {
  std::vector<double> z;
  std::vector<double> zdot;
};

struct RunStatus {
  bool truncated = false;
  std::string reason;
  double t_end = 0.0;
  std::size_t samples = 0;
};

using StateObserver =
    std::function<void(double t, std::span<const double> z, std::span<const double> zdot)>;

/// Integrates d/dt (z, zdot) = M_N (z, zdot) + F(t) and reports every output
/// sample to `observe`. Runs whose state leaves [-overflow_limit,
/// overflow_limit] or turns non-finite stop early with `truncated` set.
RunStatus integrate_observed(const FlockSpec& spec, const IntegratorOptions& opts,
                             const StateObserver& observe,
                             const std::optional<InitialState>& initial = std::nullopt);

struct Trajectory {
  int N = 0;
  double v0 = 0.0;
  double delta = 0.0;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  IntegratorOptions options;
  std::vector<double> times;
  std::vector<double> z;     // row-major: sample x agent
  std::vector<double> zdot;  // row-major: sample x agent
  bool truncated = false;
  std::string truncation_reason;

  std::size_t samples() const { return times.size(); }
  std::span<const double> positions(std::size_t sample) const;
  std::span<const double> velocities(std::size_t sample) const;
  double leader(std::size_t sample) const { return v0 * times[sample]; }
  /// d_N(t) = z_N(t) - v0 t per sample.
  std::vector<double> last_agent_deviation() const;
};

Trajectory integrate(const FlockSpec& spec, const IntegratorOptions& opts,
                     const std::optional<InitialState>& initial = std::nullopt);

/// Time series of the last agent relative to the leader, d_N(t) = z_N - v0 t.
struct Signal {
  std::vector<double> t;
  std::vector<double> d;
  int N = 0;
  double v0 = 0.0;
  bool truncated = false;
};

/// Same run as integrate() but keeps only d_N(t), for large sweeps.
Signal trace_last_agent(const FlockSpec& spec, const IntegratorOptions& opts);

Signal last_agent_signal(const Trajectory& tr);

/// x_k(t) - v0 t = z_k - k delta - v0 t, row-major sample x agent.
std::vector<double> relative_positions(const Trajectory& tr);

}  // namespace flockwave
