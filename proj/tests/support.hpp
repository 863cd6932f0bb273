#pragma once

#include <cstdint>
#include <random>

#include "flockwave/coupling.hpp"
#include "flockwave/spec_io.hpp"

namespace flockwave::testing {

inline FlockSpec fig6(int N = 200, BoundaryKind b = BoundaryKind::FixedInteraction) {
  FlockSpec s;
  s.config = CouplingConfig(-2, -2, Stencil(Stencil::Values{-0.5, 0.25, 1, -0.75, 0}),
                            Stencil(Stencil::Values{-1, 0.75, 1, -1, 0.25}));
  s.N = N;
  s.boundary = b;
  return s;
}

inline FlockSpec fig7(int N = 200, BoundaryKind b = BoundaryKind::FixedInteraction) {
  FlockSpec s;
  s.config = CouplingConfig(-2, -2, Stencil(Stencil::Values{1, -2, 1, 0, 0}),
                            Stencil(Stencil::Values{-0.5, -1, 1, 0.5, 0}));
  s.N = N;
  s.boundary = b;
  return s;
}

inline FlockSpec fig4(int N = 200, BoundaryKind b = BoundaryKind::FixedInteraction) {
  auto s = parse_spec(R"({"g_x": -2, "g_v": -2,
    "rho_x": ["4/27", "-289/432", 1, "-253/432", "23/216"],
    "rho_v": ["47/216", "-29/108", 1, "-79/108", "-47/216"],
    "N": 200, "delta": 1, "v0": 1, "boundary": "fixed_interaction"})");
  s.N = N;
  s.boundary = b;
  return s;
}

// Type III example with the rho_{x,-1} sign fixed so that the row sum vanishes.
inline FlockSpec fig8(int N = 50) {
  FlockSpec s;
  s.config = CouplingConfig(-2, -2, Stencil(Stencil::Values{-2, 3.75, 1, -5.25, 2.5}),
                            Stencil(Stencil::Values{-1, 4, 1, -5, 1}));
  s.N = N;
  return s;
}

/// Random decentralized config with arbitrary (not necessarily stable) weights.
inline CouplingConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> g(-3.0, 0.5);
  auto stencil = [&] {
    Stencil::Values v{u(rng), u(rng), 1.0, u(rng), 0.0};
    v[4] = -(v[0] + v[1] + v[2] + v[3]);
    return Stencil(v);
  };
  return CouplingConfig(g(rng), g(rng), stencil(), stencil());
}

/// Random config that also satisfies condition (i).
inline CouplingConfig random_reduced_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return config_from_reduced(FreeParameters{-2.0, -2.0, u(rng), u(rng), u(rng), u(rng), u(rng)});
}

}  // namespace flockwave::testing
