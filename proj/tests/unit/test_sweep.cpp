#include <doctest.h>

#include <cmath>

#include "flockwave/error.hpp"
#include "flockwave/sweep.hpp"
#include "support.hpp"

using namespace flockwave;
namespace t = flockwave::testing;

namespace {

SweepPlan small_plan() {
  SweepPlan p;
  p.type1_count = 2;
  p.type2_count = 2;
  p.n_max = 1;
  p.seed = 5;
  return p;
}

GeneratedConfig wrap(std::size_t id, const CouplingConfig& c) { return {id, {}, c}; }

}  // namespace

TEST_CASE("singleton grid reproduces the Type I example") {
  const auto plan = parse_plan(R"({"scheme": "grid",
    "axes": {"alpha_x1": [-0.5], "beta_x1": [-1], "alpha_v1": [-0.25], "beta_v1": [-1.75], "beta_v2": [1.25]}})");
  const auto configs = generate_configurations(plan);
  REQUIRE(configs.size() == 1);
  CHECK(configs[0].config == t::fig6().config);
}

TEST_CASE("grid is the Cartesian product") {
  auto plan = parse_plan(R"({"scheme": "grid", "grid_points": 3,
    "axes": {"alpha_x1": [-0.5], "beta_x1": {"lo": -1, "hi": 1}, "alpha_v1": [-0.25, -0.5],
             "beta_v1": [-1.75], "beta_v2": [1.25]}})");
  const auto configs = generate_configurations(plan);
  CHECK(configs.size() == 6);
  for (std::size_t i = 0; i < configs.size(); ++i) CHECK(configs[i].id == i);
}

TEST_CASE("random generation is deterministic and valid") {
  SweepPlan plan;
  const auto a = generate_configurations(plan, 99, 300);
  const auto b = generate_configurations(plan, 99, 300);
  const auto c = generate_configurations(plan, 100, 300);
  REQUIRE(a.size() == 300);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].config == b[i].config);
    differs = differs || !(a[i].config == c[i].config);
    CHECK(validate_config(a[i].config).valid());
    const auto p = reduce(a[i].config);
    CHECK(std::abs(p.beta_x[1] + 2 * p.beta_x[2]) <= 1e-12);
    CHECK(p.alpha_v[1] >= -4.0 / 3);
    CHECK(p.alpha_v[1] <= 0.0);
  }
  CHECK(differs);
}

TEST_CASE("plan validation") {
  CHECK_THROWS_AS(parse_plan(R"({"axes": {"beta_x1": {"lo": 1, "hi": -1}}})"), Error);
  CHECK_THROWS_AS(parse_plan(R"({"n_max": 12})"), Error);
  CHECK_THROWS_AS(parse_plan(R"({"type1_count": 0})"), Error);
  CHECK_THROWS_AS(parse_plan(R"({"scheme": "sobol"})"), Error);
  CHECK_THROWS_AS(parse_plan("[1, 2"), Error);
  const auto plan = parse_plan(R"({"n_max": 2, "boundaries": ["fixed_mass"]})");
  CHECK(plan.ladder() == std::vector<int>{25, 50, 100});
  const auto again = parse_plan(serialize_plan(plan));
  CHECK(serialize_plan(again) == serialize_plan(plan));
}

TEST_CASE("criteria filter and pools") {
  auto g_v_positive = config_from_reduced(FreeParameters{-2, 1, -0.5, -1, -0.25, -1.75, 1.25});
  const std::vector<GeneratedConfig> configs{wrap(0, t::fig6().config), wrap(1, t::fig7().config),
                                             wrap(2, g_v_positive), wrap(3, t::fig4().config)};
  const auto all = filter_criteria(configs);
  CHECK(all.size() == 3);
  const auto type1 = filter_criteria(configs, PoolKind::TypeI);
  REQUIRE(type1.size() == 1);
  CHECK(type1[0].id == 0);
  const auto type2 = filter_criteria(configs, PoolKind::TypeII);
  REQUIRE(type2.size() == 1);
  CHECK(type2[0].id == 1);
}

TEST_CASE("eigen filter") {
  const std::vector<GeneratedConfig> configs{wrap(0, t::fig6().config), wrap(1, t::fig4().config)};
  const auto kept = filter_eigen(configs, 100, BoundaryKind::FixedInteraction, 1);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == 0);
  CHECK(filter_eigen({wrap(1, t::fig4().config)}, 200, BoundaryKind::FixedInteraction, 1).empty());
  CHECK(filter_eigen({}, 100, BoundaryKind::FixedInteraction).empty());
}

TEST_CASE("compare_sets") {
  SUBCASE("agreeing universe gives an empty report") {
    const auto r = compare_sets({wrap(0, t::fig6().config), wrap(1, t::fig7().config)}, 100,
                                BoundaryKind::FixedInteraction, {200}, 1);
    CHECK(r.entries.empty());
    CHECK(r.criteria_count == 2);
    CHECK(r.eigen_count == 2);
  }
  SUBCASE("the unstable example is a known counterexample") {
    const auto r = compare_sets({wrap(0, t::fig6().config), wrap(7, t::fig4().config)}, 100,
                                BoundaryKind::FixedInteraction, {200, 400}, 1);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].id == 7);
    CHECK(r.entries[0].criteria_pass);
    CHECK(r.entries[0].circle_margin < 0.0);
    CHECK(r.entries[0].status == DiscrepancyStatus::Counterexample);
    CHECK(r.entries[0].eigen_stable.size() == 3);
  }
}

TEST_CASE("pool members meet every selection rule") {
  const auto plan = small_plan();
  const auto pool = build_pool(plan);
  REQUIRE(pool.members.size() == 4);
  for (const auto& m : pool.members) {
    const auto p = reduce(m.config.config);
    CHECK(necessary_criteria(p, m.config.config).overall);
    CHECK(circle_spectral_margin(p) < 0.0);
    const auto cls = classify(m.velocities);
    if (m.type == SolutionType::TypeI) {
      CHECK(cls.attenuating);
      CHECK(2 * (1 / m.velocities.c_plus - 1 / m.velocities.c_minus) <= plan.horizon_factor);
    } else {
      CHECK(m.type == SolutionType::TypeII);
      CHECK(1 / m.velocities.c_minus <= plan.horizon_factor);
    }
  }
}

TEST_CASE("experiment output does not depend on the worker count") {
  const auto plan = small_plan();
  const auto pool = build_pool(plan);
  const auto a = error_scaling_experiment(pool.members, plan.ladder(), plan.boundaries, 1e-7, 1);
  const auto b = error_scaling_experiment(pool.members, plan.ladder(), plan.boundaries, 1e-7, 3);
  REQUIRE(a.size() == 4 * 2 * 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].config_id == b[i].config_id);
    CHECK(a[i].N == b[i].N);
    CHECK(a[i].boundary == b[i].boundary);
    CHECK(a[i].ok == b[i].ok);
    CHECK(a[i].errors == b[i].errors);
    for (double e : a[i].errors) CHECK(e >= 0.0);
  }
}

TEST_CASE("aggregation and slopes") {
  std::vector<SweepRecord> records;
  for (std::size_t id : {1u, 2u}) {
    for (int N : {25, 50, 100, 200}) {
      SweepRecord r;
      r.config_id = id;
      r.type = SolutionType::TypeI;
      r.N = N;
      r.ok = true;
      const double scale = id == 1 ? 1.0 : 3.0;
      r.errors = {scale / std::sqrt(N), scale / std::sqrt(N), scale / N};
      records.push_back(r);
    }
  }
  SweepRecord failed;
  failed.config_id = 3;
  failed.type = SolutionType::TypeI;
  failed.N = 25;
  failed.errors = {100, 100, 100};
  records.push_back(failed);

  const auto agg = aggregate(records);
  REQUIRE(agg.size() == 4);
  CHECK(agg[0].N == 25);
  CHECK(agg[0].count == 2);
  CHECK(agg[0].failed == 1);
  CHECK(agg[0].mean[0] == doctest::Approx(2.0 / 5.0));
  CHECK(agg[0].max[0] == doctest::Approx(3.0 / 5.0));
  const auto slopes = fit_slopes(agg);
  REQUIRE(slopes.size() == 3);
  CHECK(*slopes[0].slope == doctest::Approx(-0.5));
  CHECK(*slopes[1].slope == doctest::Approx(-0.5));
  CHECK(*slopes[2].slope == doctest::Approx(-1.0));

  records.resize(1);
  const auto single = fit_slopes(aggregate(records));
  for (const auto& s : single) CHECK_FALSE(s.slope.has_value());
}
