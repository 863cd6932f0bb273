#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "flockwave/characterize.hpp"
#include "flockwave/simulate.hpp"
#include "flockwave/stability.hpp"

namespace flockwave {

/// Range of one free parameter. A non-empty `values` list overrides the range
/// in grid mode.
struct ParamAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;
};

enum class GenerationScheme { Grid, Random };

struct SweepPlan {
  GenerationScheme scheme = GenerationScheme::Random;
  double g_x = -2.0;
  double g_v = -2.0;
  // alpha_x1, beta_x1, alpha_v1, beta_v1, beta_v2
  std::array<ParamAxis, 5> axes{ParamAxis{-2.5, 0.0, {}}, ParamAxis{-4.0, 4.0, {}},
                                ParamAxis{-4.0 / 3.0, 0.0, {}}, ParamAxis{-4.0, 4.0, {}},
                                ParamAxis{-4.0, 4.0, {}}};
  int grid_points = 5;           // per axis when a range is gridded
  std::size_t samples = 1000;    // random draws for compare_sets
  std::size_t type1_count = 50;
  std::size_t type2_count = 50;
  std::size_t max_candidates = 200000;  // rejection-sampling budget for pools
  double horizon_factor = 10.0;         // T <= c N (Type I), T2 <= c N (Type II)
  int n_max = 6;                        // ladder N = 25 * 2^n, n = 0..n_max
  std::vector<BoundaryKind> boundaries{BoundaryKind::FixedInteraction, BoundaryKind::FixedMass};
  int check_N = 100;                    // eigen check size for pools and P_S
  std::vector<int> escalation{200, 400, 800};
  double tolerance = 1e-8;              // integrator abs = rel tolerance
  std::uint64_t seed = 1;

  std::vector<int> ladder() const;
  /// Throws flockwave::Error on empty or non-finite ranges, zero counts or
  /// n_max outside 0..11.
  void check() const;
};

SweepPlan parse_plan(std::string_view json_text);
std::string serialize_plan(const SweepPlan& plan);

struct GeneratedConfig {
  std::size_t id = 0;
  FreeParameters free;
  CouplingConfig config;
};

/// Grid: Cartesian product in axis order. Random: `count` draws from a
/// mt19937_64 seeded with `seed`, uniform on each axis.
std::vector<GeneratedConfig> generate_configurations(const SweepPlan& plan, std::uint64_t seed,
                                                     std::size_t count);
std::vector<GeneratedConfig> generate_configurations(const SweepPlan& plan);

/// Same draw as generate_configurations, one config at a time.
class ConfigStream {
 public:
  ConfigStream(const SweepPlan& plan, std::uint64_t seed);
  GeneratedConfig next();
  std::size_t drawn() const { return next_id_; }

 private:
  SweepPlan plan_;
  std::mt19937_64 engine_;
  std::size_t next_id_ = 0;
};

enum class PoolKind { All, TypeI, TypeII };

/// P_C: configs passing conditions (i)-(vii); the Type I pool additionally
/// needs |c_-| < c_+, the Type II pool a Type II classification.
std::vector<GeneratedConfig> filter_criteria(const std::vector<GeneratedConfig>& configs,
                                             PoolKind kind = PoolKind::All);

/// P_S,N: configs whose line system is eigen-stable at size N.
std::vector<GeneratedConfig> filter_eigen(const std::vector<GeneratedConfig>& configs, int N,
                                          BoundaryKind boundary, int threads = 0);

bool eigen_stable(const CouplingConfig& config, int N, BoundaryKind boundary);

enum class DiscrepancyStatus { Resolved, Persistent, Counterexample };
std::string_view to_string(DiscrepancyStatus s);

struct Discrepancy {
  std::size_t id = 0;
  bool criteria_pass = false;
  double circle_margin = 0.0;
  std::vector<std::pair<int, bool>> eigen_stable;  // (N, stable) per escalation step
  DiscrepancyStatus status = DiscrepancyStatus::Persistent;
};

struct DiscrepancyReport {
  std::size_t universe = 0;
  std::size_t criteria_count = 0;
  std::size_t eigen_count = 0;
  std::vector<Discrepancy> entries;  // sorted by id

  std::size_t count(DiscrepancyStatus s) const;
};

/// Symmetric difference of P_C and P_S,N over `universe`, with each discrepancy
/// re-tested at the escalation sizes. A discrepancy that vanishes at some
/// larger N is resolved. Criteria-pass configs that are circle-stable but
/// stay line-unstable form the known counterexample class.
DiscrepancyReport compare_sets(const std::vector<GeneratedConfig>& universe, int N,
                               BoundaryKind boundary, const std::vector<int>& escalation,
                               int threads = 0);

struct PoolMember {
  GeneratedConfig config;
  SolutionType type = SolutionType::Degenerate;
  SignalVelocities velocities;
};

struct Pool {
  std::vector<PoolMember> members;  // Type I first, then Type II, each by id
  std::size_t candidates_drawn = 0;
};

/// Rejection sampling from the plan's random stream. A candidate enters when
/// it passes the criteria, has the requested type, meets the horizon
/// constraint, is circle-stable and is line-stable at check_N for every
/// boundary kind in the plan.
Pool build_pool(const SweepPlan& plan);

inline constexpr std::array<std::string_view, 3> kType1Descriptors{"A1", "alpha", "T"};
inline constexpr std::array<std::string_view, 3> kType2Descriptors{"A", "T1", "T2"};

struct SweepRecord {
  std::size_t config_id = 0;
  SolutionType type = SolutionType::Degenerate;
  int N = 0;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  bool ok = false;
  std::string failure;
  std::array<double, 3> predicted{};
  std::array<double, 3> measured{};
  std::array<double, 3> errors{};
  double wall_seconds = 0.0;
};

/// Simulation horizon for a pool member at size N: N/c_+ + 1.25 T (Type I) or
/// 1.25 T2 (Type II).
double sweep_horizon(const PoolMember& m, int N);

/// Simulates, measures and compares one (config, N, boundary) task.
SweepRecord run_task(const PoolMember& m, int N, BoundaryKind boundary, double tolerance);

/// All tasks in parallel; records sorted by (type, config id, boundary, N).
std::vector<SweepRecord> error_scaling_experiment(const std::vector<PoolMember>& pool,
                                                  const std::vector<int>& ladder,
                                                  const std::vector<BoundaryKind>& boundaries,
                                                  double tolerance, int threads = 0);

struct Aggregate {
  SolutionType type = SolutionType::Degenerate;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  int N = 0;
  std::size_t count = 0;
  std::size_t failed = 0;
  std::array<double, 3> mean{};
  std::array<double, 3> max{};
};

std::vector<Aggregate> aggregate(const std::vector<SweepRecord>& records);

struct SlopeFit {
  SolutionType type = SolutionType::Degenerate;
  BoundaryKind boundary = BoundaryKind::FixedInteraction;
  std::size_t descriptor = 0;
  std::optional<double> slope;  // empty for a single ladder point
};

/// Least-squares slope of log(mean error) against log N.
std::vector<SlopeFit> fit_slopes(const std::vector<Aggregate>& aggregates);

/// FLOCKWAVE_THREADS if set and positive, else the hardware concurrency.
int default_threads();

}  // namespace flockwave
