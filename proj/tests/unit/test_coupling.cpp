#include <doctest.h>

#include <random>
#include <string>

#include "flockwave/coupling.hpp"
#include "flockwave/error.hpp"
#include "flockwave/spec_io.hpp"
#include "support.hpp"

using namespace flockwave;
using flockwave::testing::fig4;
using flockwave::testing::fig6;

TEST_CASE("reduce on the Type I example") {
  const auto p = reduce(fig6().config);
  CHECK(p.alpha_x[1] == -0.5);
  CHECK(p.beta_x[1] == -1.0);
  CHECK(p.alpha_x[2] == -0.5);
  CHECK(p.beta_x[2] == 0.5);
  CHECK(p.alpha_v[1] == -0.25);
  CHECK(p.beta_v[1] == -1.75);
  CHECK(p.alpha_v[2] == -0.75);
  CHECK(p.beta_v[2] == 1.25);
  CHECK(p.velocity_skew() == 0.75);
  // Sum of the alphas vanishes with alpha_0 = 1.
  CHECK(1.0 + p.alpha_x[1] + p.alpha_x[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("config_from_reduced inverts reduce") {
  const FreeParameters f{-2, -2, -0.5, -1, -0.25, -1.75, 1.25};
  CHECK(config_from_reduced(f) == fig6().config);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto c = flockwave::testing::random_reduced_config(rng);
    REQUIRE(validate_config(c).valid());
    const auto back = config_from_reduced(reduce(c));
    for (int j = -2; j <= 2; ++j) {
      CHECK(std::abs(back.rho_x()[j] - c.rho_x()[j]) <= 1e-12);
      CHECK(std::abs(back.rho_v()[j] - c.rho_v()[j]) <= 1e-12);
    }
  }
}

TEST_CASE("validate_config") {
  CHECK(validate_config(fig6().config).valid());
  CHECK(validate_config(fig4().config).valid());

  SUBCASE("row sum within float tolerance") {
    const Stencil ok(Stencil::Values{-0.5, 0.25, 1, -0.75, 5e-13});
    const Stencil bad(Stencil::Values{-0.5, 0.25, 1, -0.75, 1e-11});
    const Stencil good_v = fig6().config.rho_v();
    CHECK(validate_config(CouplingConfig(-2, -2, ok, good_v)).valid());
    const auto report = validate_config(CouplingConfig(-2, -2, bad, good_v));
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].field == "rho_x");
    CHECK(report.violations[0].constraint == "row_sum");
    CHECK(report.violations[0].residual == doctest::Approx(1e-11));
  }
  SUBCASE("center must be one") {
    const Stencil c(Stencil::Values{-0.5, 0.25, 2, -1.75, 0});
    const auto report = validate_config(CouplingConfig(-2, -2, c, fig6().config.rho_v()));
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].constraint == "center");
  }
  SUBCASE("truncated decimals of exact rationals fail") {
    // 4/27 and friends truncated to three digits leave a row sum of 1e-3.
    const auto doc = parse_spec_document(R"({"g_x": -2, "g_v": -2,
      "rho_x": [0.148, -0.668, 1, -0.585, 0.106],
      "rho_v": ["47/216", "-29/108", 1, "-79/108", "-47/216"],
      "N": 200, "delta": 1, "v0": 1, "boundary": "fixed_interaction"})");
    CHECK_FALSE(validate_config(doc.config).valid());
  }
  SUBCASE("printed Type III example has a nonzero row sum") {
    const auto doc = parse_spec_document(R"({"g_x": -2, "g_v": -2,
      "rho_x": [-2, "-15/4", 1, "-21/4", "5/2"], "rho_v": [-1, 4, 1, -5, 1],
      "N": 50, "delta": 1, "v0": 1, "boundary": "fixed_interaction"})");
    const auto report = validate_config(doc.config);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].exact);
    CHECK(report.violations[0].residual == -7.5);
  }
}

TEST_CASE("reduce refuses invalid configs") {
  const Stencil bad(Stencil::Values{0, 0, 1, 0, 0});
  CHECK_THROWS_AS(reduce(CouplingConfig(-2, -2, bad, bad)), Error);
}

TEST_CASE("parse_number") {
  auto r = parse_number("-289/432");
  REQUIRE(r.exact);
  CHECK(*r.exact == Rational(-289, 432));
  r = parse_number("0.25");
  REQUIRE(r.exact);
  CHECK(*r.exact == Rational(1, 4));
  r = parse_number("1e-3");
  REQUIRE(r.exact);
  CHECK(*r.exact == Rational(1, 1000));
  CHECK(r.value == 1e-3);
  CHECK_THROWS_AS(parse_number("1/0"), Error);
  CHECK_THROWS_AS(parse_number("abc"), Error);
}

TEST_CASE("spec round trip") {
  for (const auto& spec : {fig6(), fig4(), fig6(50, BoundaryKind::Periodic)}) {
    const auto text = serialize_spec(spec);
    CHECK(parse_spec(text) == spec);
  }
}

TEST_CASE("spec errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_spec(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string base = R"("g_x": -2, "g_v": -2, "rho_v": [-1, 0.75, 1, -1, 0.25], "delta": 1, "v0": 1)";
  CHECK(message("{" + base + R"(, "N": 200, "boundary": "fixed_interaction"})").find("rho_x") !=
        std::string::npos);
  CHECK(message("{" + base + R"(, "rho_x": [-0.5, 0.25, 1, -0.75, 0], "N": 4, "boundary": "fixed_interaction"})")
            .find("N") != std::string::npos);
  CHECK(message("{" + base + R"(, "rho_x": [-0.5, 0.25, 1, -0.75, 0], "N": 20, "boundary": "ring"})")
            .find("boundary") != std::string::npos);
  CHECK(message("{" + base + R"(, "rho_x": [-0.5, 0.25, 1, -0.75], "N": 20, "boundary": "periodic"})")
            .find("rho_x") != std::string::npos);
  CHECK(message("{" + base + R"(, "rho_x": [-0.5, 0.25, 1, -0.75, 1], "N": 20, "boundary": "periodic"})")
            .find("row_sum") != std::string::npos);
  CHECK_THROWS_AS(parse_spec("not json"), Error);
}

TEST_CASE("check_spec") {
  auto s = fig6();
  CHECK_NOTHROW(check_spec(s));
  s.N = 4;
  CHECK_THROWS_AS(check_spec(s), Error);
  s = fig6();
  s.delta = -1;
  CHECK_THROWS_AS(check_spec(s), Error);
  CHECK_THROWS_AS(boundary_from_string("open"), Error);
  CHECK(boundary_from_string("fixed_mass") == BoundaryKind::FixedMass);
}
