#pragma once

#include <numbers>

#include "bsrd/timestepper.hpp"

namespace fixtures {

/// Smooth, positive, non-equilibrium data on the 2pi x 1 strip.
inline bsrd::RunConfig generic(int n, const bsrd::SystemParameters& p, double T) {
  using namespace bsrd;
  RunConfig c;
  c.grid = make_grid(n, n, c.preset);
  c.params = p;
  c.t_final = T;
  c.output_every = T > 0.0 ? T / 10.0 : 1.0;
  c.initial.u.kind = ProfileKind::gaussian;
  c.initial.u.value = 0.5;
  c.initial.u.height = 1.0;
  c.initial.u.center = {std::numbers::pi, 0.3};
  c.initial.u.width = 0.6;
  c.initial.w.kind = ProfileKind::cosine;
  c.initial.w.value = 1.0;
  c.initial.w.amplitude = 0.3;
  c.initial.z.kind = ProfileKind::gaussian;
  c.initial.z.value = 0.2;
  c.initial.z.height = 0.3;
  c.initial.z.center = {1.0, 0.0};
  c.initial.z.width = 0.5;
  return c;
}

inline bsrd::SimulationState generic_state(int nx, int ny, const bsrd::MotionPreset& preset) {
  using namespace bsrd;
  RunConfig c = generic(4, SystemParameters{}, 0.0);
  c.preset = preset;
  c.grid = make_grid(nx, ny, preset);
  return initial_state(c);
}

}  // namespace fixtures
