#include "flockwave/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "flockwave/error.hpp"
#include "flockwave/system.hpp"

namespace flockwave {

namespace {

constexpr std::array<const char*, 5> kAxisNames{"alpha_x1", "beta_x1", "alpha_v1", "beta_v1",
                                                "beta_v2"};

FreeParameters free_from(const SweepPlan& plan, const std::array<double, 5>& x) {
  return {plan.g_x, plan.g_v, x[0], x[1], x[2], x[3], x[4]};
}

std::vector<double> axis_grid(const ParamAxis& a, int points) {
  if (!a.values.empty()) return a.values;
  if (a.lo == a.hi || points == 1) return {a.lo};
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(a.lo + (a.hi - a.lo) * i / (points - 1));
  return out;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = default_threads();
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("FLOCKWAVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<int> SweepPlan::ladder() const {
  std::vector<int> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(25 << n);
  return out;
}

void SweepPlan::check() const {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    const std::string name = std::string("axes.") + kAxisNames[i];
    for (double v : a.values) {
      if (!std::isfinite(v)) throw Error("sweep", name + ": non-finite value");
    }
    if (a.values.empty()) {
      if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw Error("sweep", name + ": non-finite range");
      if (a.lo > a.hi) throw Error("sweep", name + ": empty range (lo > hi)");
    }
  }
  if (!std::isfinite(g_x) || !std::isfinite(g_v)) throw Error("sweep", "gains must be finite");
  if (grid_points < 1) throw Error("sweep", "grid_points must be >= 1");
  if (samples < 1 || type1_count < 1 || type2_count < 1) throw Error("sweep", "counts must be >= 1");
  if (n_max < 0 || n_max > 11) throw Error("sweep", "n_max must lie in 0..11");
  if (boundaries.empty()) throw Error("sweep", "no boundary kinds");
  if (!(horizon_factor > 0.0)) throw Error("sweep", "horizon_factor must be positive");
  if (!(tolerance > 0.0)) throw Error("sweep", "tolerance must be positive");
  if (check_N <= 4 || check_N > kDenseEigenCeiling) throw Error("sweep", "check_N out of range");
  for (int n : escalation) {
    if (n <= 4 || n > kDenseEigenCeiling) throw Error("sweep", "escalation size out of range");
  }
}

SweepPlan parse_plan(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("sweep", std::string("plan is not valid JSON: ") + e.what());
  }
  SweepPlan p;
  try {
    if (j.contains("scheme")) {
      const auto s = j.at("scheme").get<std::string>();
      if (s == "grid") {
        p.scheme = GenerationScheme::Grid;
      } else if (s == "random") {
        p.scheme = GenerationScheme::Random;
      } else {
        throw Error("sweep", "scheme: expected grid or random, got '" + s + "'");
      }
    }
    if (j.contains("g_x")) p.g_x = j.at("g_x").get<double>();
    if (j.contains("g_v")) p.g_v = j.at("g_v").get<double>();
    if (j.contains("axes")) {
      const auto& axes = j.at("axes");
      for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
        if (!axes.contains(kAxisNames[i])) continue;
        const auto& a = axes.at(kAxisNames[i]);
        if (a.is_array()) {
          p.axes[i].values = a.get<std::vector<double>>();
          p.axes[i].lo = *std::min_element(p.axes[i].values.begin(), p.axes[i].values.end());
          p.axes[i].hi = *std::max_element(p.axes[i].values.begin(), p.axes[i].values.end());
        } else {
          p.axes[i].lo = a.at("lo").get<double>();
          p.axes[i].hi = a.at("hi").get<double>();
          p.axes[i].values.clear();
          if (a.contains("values")) p.axes[i].values = a.at("values").get<std::vector<double>>();
        }
      }
    }
    if (j.contains("grid_points")) p.grid_points = j.at("grid_points").get<int>();
    if (j.contains("samples")) p.samples = j.at("samples").get<std::size_t>();
    if (j.contains("type1_count")) p.type1_count = j.at("type1_count").get<std::size_t>();
    if (j.contains("type2_count")) p.type2_count = j.at("type2_count").get<std::size_t>();
    if (j.contains("max_candidates")) p.max_candidates = j.at("max_candidates").get<std::size_t>();
    if (j.contains("horizon_factor")) p.horizon_factor = j.at("horizon_factor").get<double>();
    if (j.contains("n_max")) p.n_max = j.at("n_max").get<int>();
    if (j.contains("boundaries")) {
      p.boundaries.clear();
      for (const auto& b : j.at("boundaries")) p.boundaries.push_back(boundary_from_string(b.get<std::string>()));
    }
    if (j.contains("check_N")) p.check_N = j.at("check_N").get<int>();
    if (j.contains("escalation")) p.escalation = j.at("escalation").get<std::vector<int>>();
    if (j.contains("tolerance")) p.tolerance = j.at("tolerance").get<double>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("sweep", std::string("plan: ") + e.what());
  }
  p.check();
  return p;
}

std::string serialize_plan(const SweepPlan& p) {
  nlohmann::json j;
  j["scheme"] = p.scheme == GenerationScheme::Grid ? "grid" : "random";
  j["g_x"] = p.g_x;
  j["g_v"] = p.g_v;
  for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
    nlohmann::json a{{"lo", p.axes[i].lo}, {"hi", p.axes[i].hi}};
    if (!p.axes[i].values.empty()) a["values"] = p.axes[i].values;
    j["axes"][kAxisNames[i]] = a;
  }
  j["grid_points"] = p.grid_points;
  j["samples"] = p.samples;
  j["type1_count"] = p.type1_count;
  j["type2_count"] = p.type2_count;
  j["max_candidates"] = p.max_candidates;
  j["horizon_factor"] = p.horizon_factor;
  j["n_max"] = p.n_max;
  j["boundaries"] = nlohmann::json::array();
  for (auto b : p.boundaries) j["boundaries"].push_back(std::string(to_string(b)));
  j["check_N"] = p.check_N;
  j["escalation"] = p.escalation;
  j["tolerance"] = p.tolerance;
  j["seed"] = p.seed;
  return j.dump(2);
}

ConfigStream::ConfigStream(const SweepPlan& plan, std::uint64_t seed) : plan_(plan), engine_(seed) {
  plan_.check();
}

GeneratedConfig ConfigStream::next() {
  std::array<double, 5> x{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uniform_real_distribution<double> u(plan_.axes[i].lo, plan_.axes[i].hi);
    x[i] = plan_.axes[i].lo == plan_.axes[i].hi ? plan_.axes[i].lo : u(engine_);
  }
  const auto f = free_from(plan_, x);
  return {next_id_++, f, config_from_reduced(f)};
}

std::vector<GeneratedConfig> generate_configurations(const SweepPlan& plan, std::uint64_t seed,
                                                     std::size_t count) {
  plan.check();
  std::vector<GeneratedConfig> out;
  if (plan.scheme == GenerationScheme::Random) {
    ConfigStream stream(plan, seed);
    for (std::size_t i = 0; i < count; ++i) out.push_back(stream.next());
    return out;
  }
  std::array<std::vector<double>, 5> grids;
  for (std::size_t i = 0; i < grids.size(); ++i) grids[i] = axis_grid(plan.axes[i], plan.grid_points);
  std::array<std::size_t, 5> idx{};
  while (true) {
    std::array<double, 5> x{};
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = grids[i][idx[i]];
    const auto f = free_from(plan, x);
    out.push_back({out.size(), f, config_from_reduced(f)});
    std::size_t axis = grids.size();
    while (axis > 0) {
      --axis;
      if (++idx[axis] < grids[axis].size()) break;
      idx[axis] = 0;
      if (axis == 0) return out;
    }
  }
}

std::vector<GeneratedConfig> generate_configurations(const SweepPlan& plan) {
  return generate_configurations(plan, plan.seed, plan.samples);
}

namespace {

struct Assessment {
  bool criteria = false;
  std::optional<Classification> cls;
  std::optional<SignalVelocities> velocities;
};

Assessment assess(const CouplingConfig& config) {
  Assessment a;
  const auto p = reduce(config);
  a.criteria = necessary_criteria(p, config).overall;
  if (velocity_discriminant(p) > 0.0) {
    a.velocities = signal_velocities(p);
    a.cls = classify(*a.velocities);
  }
  return a;
}

bool matches(const Assessment& a, PoolKind kind) {
  if (!a.criteria) return false;
  switch (kind) {
    case PoolKind::All:
      return true;
    case PoolKind::TypeI:
      return a.cls && a.cls->type == SolutionType::TypeI && a.cls->attenuating;
    case PoolKind::TypeII:
      return a.cls && a.cls->type == SolutionType::TypeII;
  }
  return false;
}

}  // namespace

std::vector<GeneratedConfig> filter_criteria(const std::vector<GeneratedConfig>& configs,
                                             PoolKind kind) {
  std::vector<GeneratedConfig> out;
  for (const auto& c : configs) {
    if (matches(assess(c.config), kind)) out.push_back(c);
  }
  return out;
}

bool eigen_stable(const CouplingConfig& config, int N, BoundaryKind boundary) {
  FlockSpec spec;
  spec.config = config;
  spec.N = N;
  spec.boundary = boundary;
  return line_eigen_stability(build_system(spec)).verdict == Verdict::Stable;
}

std::vector<GeneratedConfig> filter_eigen(const std::vector<GeneratedConfig>& configs, int N,
                                          BoundaryKind boundary, int threads) {
  std::vector<char> keep(configs.size(), 0);
  parallel_for(configs.size(), threads, [&](std::size_t i) {
    try {
      keep[i] = eigen_stable(configs[i].config, N, boundary) ? 1 : 0;
    } catch (const Error& e) {
      throw Error("sweep", "config " + std::to_string(configs[i].id) + ": " + e.what());
    }
  });
  std::vector<GeneratedConfig> out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (keep[i]) out.push_back(configs[i]);
  }
  return out;
}

std::string_view to_string(DiscrepancyStatus s) {
  switch (s) {
    case DiscrepancyStatus::Resolved:
      return "resolved";
    case DiscrepancyStatus::Persistent:
      return "persistent";
    case DiscrepancyStatus::Counterexample:
      return "counterexample";
  }
  return "unknown";
}

std::size_t DiscrepancyReport::count(DiscrepancyStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [s](const auto& e) { return e.status == s; }));
}

DiscrepancyReport compare_sets(const std::vector<GeneratedConfig>& universe, int N,
                               BoundaryKind boundary, const std::vector<int>& escalation,
                               int threads) {
  DiscrepancyReport report;
  report.universe = universe.size();
  std::vector<char> criteria(universe.size(), 0);
  for (std::size_t i = 0; i < universe.size(); ++i) {
    criteria[i] = assess(universe[i].config).criteria ? 1 : 0;
  }
  std::vector<char> stable(universe.size(), 0);
  parallel_for(universe.size(), threads, [&](std::size_t i) {
    stable[i] = eigen_stable(universe[i].config, N, boundary) ? 1 : 0;
  });
  std::vector<std::size_t> differing;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    report.criteria_count += criteria[i];
    report.eigen_count += stable[i];
    if (criteria[i] != stable[i]) differing.push_back(i);
  }

  report.entries.resize(differing.size());
  parallel_for(differing.size(), threads, [&](std::size_t k) {
    const auto& g = universe[differing[k]];
    auto& d = report.entries[k];
    d.id = g.id;
    d.criteria_pass = criteria[differing[k]] != 0;
    d.circle_margin = circle_spectral_margin(reduce(g.config));
    d.eigen_stable.emplace_back(N, stable[differing[k]] != 0);
    d.status = DiscrepancyStatus::Persistent;
    for (int n : escalation) {
      if (n <= N) continue;
      const bool s = eigen_stable(g.config, n, boundary);
      d.eigen_stable.emplace_back(n, s);
      if (s == d.criteria_pass) {
        d.status = DiscrepancyStatus::Resolved;
        break;
      }
    }
    if (d.status == DiscrepancyStatus::Persistent && d.criteria_pass && d.circle_margin < 0.0) {
      d.status = DiscrepancyStatus::Counterexample;
    }
  });
  std::sort(report.entries.begin(), report.entries.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return report;
}

Pool build_pool(const SweepPlan& plan) {
  plan.check();
  ConfigStream stream(plan, plan.seed);
  std::vector<PoolMember> type1;
  std::vector<PoolMember> type2;
  while ((type1.size() < plan.type1_count || type2.size() < plan.type2_count) &&
         stream.drawn() < plan.max_candidates) {
    const auto g = stream.next();
    const auto a = assess(g.config);
    const bool want1 = type1.size() < plan.type1_count && matches(a, PoolKind::TypeI);
    const bool want2 = type2.size() < plan.type2_count && matches(a, PoolKind::TypeII);
    if (!want1 && !want2) continue;
    const auto& v = *a.velocities;
    const double horizon_per_N =
        want1 ? 2.0 * (1.0 / v.c_plus - 1.0 / v.c_minus) : 1.0 / v.c_minus;
    if (horizon_per_N > plan.horizon_factor) continue;
    if (!(circle_spectral_margin(reduce(g.config)) < 0.0)) continue;
    bool stable = true;
    for (auto b : plan.boundaries) {
      if (!eigen_stable(g.config, plan.check_N, b)) {
        stable = false;
        break;
      }
    }
    if (!stable) continue;
    (want1 ? type1 : type2).push_back({g, a.cls->type, v});
  }
  if (type1.size() < plan.type1_count || type2.size() < plan.type2_count) {
    throw Error("sweep", "pool incomplete after " + std::to_string(stream.drawn()) +
                             " candidates: " + std::to_string(type1.size()) + " Type I, " +
                             std::to_string(type2.size()) + " Type II");
  }
  Pool pool;
  pool.candidates_drawn = stream.drawn();
  pool.members = std::move(type1);
  pool.members.insert(pool.members.end(), type2.begin(), type2.end());
  return pool;
}

double sweep_horizon(const PoolMember& m, int N) {
  const auto& v = m.velocities;
  if (m.type == SolutionType::TypeI) {
    return N / v.c_plus + 1.25 * 2.0 * N * (1.0 / v.c_plus - 1.0 / v.c_minus);
  }
  return 1.25 * N / v.c_minus;
}

SweepRecord run_task(const PoolMember& m, int N, BoundaryKind boundary, double tolerance) {
  SweepRecord r;
  r.config_id = m.config.id;
  r.type = m.type;
  r.N = N;
  r.boundary = boundary;
  const auto start = std::chrono::steady_clock::now();
  try {
    FlockSpec spec;
    spec.config = m.config.config;
    spec.N = N;
    spec.boundary = boundary;
    IntegratorOptions opts;
    opts.abs_tol = opts.rel_tol = tolerance;
    opts.t_max = sweep_horizon(m, N);
    const auto signal = trace_last_agent(spec, opts);
    if (signal.truncated) throw Error("sweep", "run truncated (state overflow)");
    if (m.type == SolutionType::TypeI) {
      const auto p = predict_type1(m.velocities, N, spec.v0);
      const auto meas = measure_type1(signal);
      const auto e = relative_errors(meas, p);
      r.predicted = {std::abs(p.amplitudes[0]), p.attenuation, p.period};
      r.measured = {std::abs(meas.amplitudes[0]), meas.attenuation, meas.period};
      r.errors = {e.A1, e.attenuation, e.period};
    } else {
      const auto p = predict_type2(m.velocities, N, spec.v0);
      const auto meas = measure_type2(signal);
      const auto e = relative_errors(meas, p);
      r.predicted = {std::abs(p.amplitude), p.T1, p.T2};
      r.measured = {std::abs(meas.amplitude), meas.T1, meas.T2};
      r.errors = {e.A, e.T1, e.T2};
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.failure = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SweepRecord> error_scaling_experiment(const std::vector<PoolMember>& pool,
                                                  const std::vector<int>& ladder,
                                                  const std::vector<BoundaryKind>& boundaries,
                                                  double tolerance, int threads) {
  struct Task {
    std::size_t member;
    int N;
    BoundaryKind boundary;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (auto b : boundaries) {
      for (int n : ladder) tasks.push_back({i, n, b});
    }
  }
  // Largest runs first for better load balance.
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.N > b.N; });
  std::vector<SweepRecord> records(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t k) {
    records[k] = run_task(pool[tasks[k].member], tasks[k].N, tasks[k].boundary, tolerance);
  });
  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tuple(a.type, a.config_id, a.boundary, a.N) <
           std::tuple(b.type, b.config_id, b.boundary, b.N);
  });
  return records;
}

std::vector<Aggregate> aggregate(const std::vector<SweepRecord>& records) {
  std::map<std::tuple<SolutionType, BoundaryKind, int>, Aggregate> groups;
  for (const auto& r : records) {
    auto& g = groups[{r.type, r.boundary, r.N}];
    g.type = r.type;
    g.boundary = r.boundary;
    g.N = r.N;
    if (!r.ok) {
      ++g.failed;
      continue;
    }
    ++g.count;
    for (std::size_t k = 0; k < 3; ++k) {
      g.mean[k] += r.errors[k];
      g.max[k] = std::max(g.max[k], r.errors[k]);
    }
  }
  std::vector<Aggregate> out;
  for (auto& [key, g] : groups) {
    if (g.count > 0) {
      for (auto& m : g.mean) m /= static_cast<double>(g.count);
    }
    out.push_back(g);
  }
  return out;
}

std::vector<SlopeFit> fit_slopes(const std::vector<Aggregate>& aggregates) {
  std::map<std::tuple<SolutionType, BoundaryKind, std::size_t>, std::vector<std::pair<double, double>>>
      series;
  for (const auto& a : aggregates) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto& s = series[{a.type, a.boundary, k}];
      if (a.count > 0 && a.mean[k] > 0.0) s.emplace_back(std::log(a.N), std::log(a.mean[k]));
    }
  }
  std::vector<SlopeFit> out;
  for (const auto& [key, pts] : series) {
    SlopeFit f;
    std::tie(f.type, f.boundary, f.descriptor) = key;
    if (pts.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double n = static_cast<double>(pts.size());
      f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace flockwave
