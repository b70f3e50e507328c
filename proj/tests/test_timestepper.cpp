#include <cmath>
#include <numbers>

#include "bsrd/cli_io.hpp"
#include "bsrd/error.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/timestepper.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bsrd;

namespace {

MotionPreset unit_square() {
  MotionPreset p;
  p.period = 1.0;
  p.height = 1.0;
  return p;
}

RunConfig constant_config(const MotionPreset& preset, int n, double u, double w, double z) {
  RunConfig c;
  c.preset = preset;
  c.grid = make_grid(n, n, preset);
  c.initial.u.value = u;
  c.initial.w.value = w;
  c.initial.z.value = z;
  return c;
}

double state_diff(const SimulationState& a, const SimulationState& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k) e = std::max(e, std::abs(a.u[k] - b.u[k]));
  for (std::size_t k = 0; k < a.w.size(); ++k) {
    e = std::max({e, std::abs(a.w[k] - b.w[k]), std::abs(a.z[k] - b.z[k])});
  }
  return e;
}

}  // namespace

TEST_SUITE("timestepper") {

TEST_CASE("diffusive stability limit") {
  const MotionPreset sq = unit_square();
  const Grid g = make_grid(16, 16, sq);
  const double h = 1.0 / 16.0;
  CHECK(cfl_dt(g, sq, {}, 0.0, 1.0) == doctest::Approx(0.25 * h * h).epsilon(1e-14));
  CHECK(cfl_dt(g, sq, {}, 0.0, 0.5) == doctest::Approx(0.125 * h * h).epsilon(1e-14));
  const SystemParameters doubled{2.0, 2.0, 2.0, 1.0, 1.0};
  CHECK(cfl_dt(g, sq, doubled, 0.0, 1.0) == doctest::Approx(0.125 * h * h).epsilon(1e-14));
  const SystemParameters tiny{1e-300, 1e-300, 1e-300, 1.0, 1.0};
  CHECK(cfl_dt(g, sq, tiny, 0.0, 1.0) > 1.0);
}

TEST_CASE("equilibrium constants are a fixed point") {
  const RunConfig c = constant_config(unit_square(), 8, std::sqrt(2.0), std::sqrt(2.0) - 1.0,
                                      2.0 - std::sqrt(2.0));
  SimulationState s = initial_state(c);
  // u w = z only up to rounding in the literals
  for (double& z : s.z) z = s.u[0] * s.w[0];
  const SimulationState s0 = s;
  const double dt = cfl_dt(c.grid, c.preset, c.params, 0.0, 1.0);
  const SimulationState s1 = step(s, dt, c.grid, c.preset, c.params);
  CHECK(state_diff(s0, s1) <= 1e-14);
  CHECK(s1.t == dt);
}

TEST_CASE("one Heun step on the linear dissociation ODE") {
  // delta_k huge switches off binding, so w' = z/delta_kp, z' = -z/delta_kp
  // independently of the ligand.
  const SystemParameters p{1.0, 1.0, 1.0, 1e300, 0.5};
  RunConfig c = constant_config(unit_square(), 8, 1.0, 0.4, 0.9);
  c.params = p;
  const SimulationState s0 = initial_state(c);
  const double dt0 = cfl_dt(c.grid, c.preset, p, 0.0, 1.0);
  double prev = 0.0;
  for (double dt : {dt0, dt0 / 2.0, dt0 / 4.0}) {
    const SimulationState s1 = step(s0, dt, c.grid, c.preset, p);
    const double decay = std::exp(-dt / 0.5);
    const double z_exact = 0.9 * decay;
    const double w_exact = 0.4 + 0.9 * (1.0 - decay);
    double e = 0.0;
    for (std::size_t i = 0; i < s1.w.size(); ++i) {
      e = std::max({e, std::abs(s1.w[i] - w_exact), std::abs(s1.z[i] - z_exact)});
    }
    // local error of RK2 on y' = -y/tau: (dt/tau)^3 / 6
    CHECK(e <= 0.9 * std::pow(dt / 0.5, 3) / 6.0 * 1.01);
    if (prev > 0.0) {
      CHECK(prev / e >= 7.0);
      CHECK(prev / e <= 9.0);
    }
    prev = e;
  }
}

TEST_CASE("two half steps match one full step to third order") {
  const SystemParameters p{1.0, 0.5, 0.2, 1.0, 1.0};
  const RunConfig c = fixtures::generic(16, p, 0.0);
  const SimulationState s0 = initial_state(c);
  const double base = cfl_dt(c.grid, c.preset, p, 0.0, 0.5);
  double prev = 0.0;
  for (double dt : {base, base / 2.0, base / 4.0}) {
    const SimulationState one = step(s0, 2.0 * dt, c.grid, c.preset, p);
    const SimulationState two =
        step(step(s0, dt, c.grid, c.preset, p), dt, c.grid, c.preset, p);
    const double e = state_diff(one, two);
    if (prev > 0.0) {
      CHECK(prev / e >= 6.5);
      CHECK(prev / e <= 9.5);
    }
    prev = e;
  }
}

TEST_CASE("step rejects unstable or invalid sizes") {
  const RunConfig c = fixtures::generic(8, {}, 0.0);
  const SimulationState s0 = initial_state(c);
  const double limit = cfl_dt(c.grid, c.preset, c.params, 0.0, 1.0);
  CHECK_THROWS_AS(step(s0, 1.5 * limit, c.grid, c.preset, c.params), ValidationError);
  CHECK_THROWS_AS(step(s0, 0.0, c.grid, c.preset, c.params), ValidationError);
  CHECK_NOTHROW(step(s0, limit, c.grid, c.preset, c.params));
}

TEST_CASE("blow-up is reported with partial output") {
  RunConfig c = constant_config(unit_square(), 8, 1e200, 1e200, 0.0);
  c.t_final = 1.0;
  c.output_every = 0.001;
  std::size_t rows = 0;
  CHECK_THROWS_AS(run(c, [&](const SimulationState&, const DiagnosticsRow&) { ++rows; }),
                  BlowUpError);
  CHECK(rows >= 1);
}

TEST_CASE("run outputs") {
  SUBCASE("T_final = 0 emits the initial row only") {
    RunConfig c = fixtures::generic(8, {}, 0.0);
    const Trajectory tr = run(c);
    REQUIRE(tr.rows.size() == 1);
    CHECK(tr.rows[0].t == 0.0);
    CHECK(tr.rows[0].dt == 0.0);
  }
  SUBCASE("zero data stays zero") {
    RunConfig c = constant_config(MotionPreset{}, 8, 0.0, 0.0, 0.0);
    c.t_final = 0.5;
    c.output_every = 0.1;
    c.keep_snapshots = true;
    const Trajectory tr = run(c);
    CHECK(tr.rows.size() == 6);
    for (const auto& s : tr.snapshots) {
      for (double v : s.u) CHECK(v == 0.0);
      for (double v : s.w) CHECK(v == 0.0);
      for (double v : s.z) CHECK(v == 0.0);
    }
  }
  SUBCASE("output times are exact multiples") {
    RunConfig c = fixtures::generic(8, {}, 0.3);
    c.output_every = 0.07;
    const Trajectory tr = run(c);
    REQUIRE(tr.rows.size() == 6);
    for (std::size_t k = 0; k + 1 < tr.rows.size(); ++k) {
      CHECK(tr.rows[k].t == static_cast<double>(k) * 0.07);
    }
    CHECK(tr.rows.back().t == 0.3);
  }
}

TEST_CASE("constant data relaxes monotonically toward the equilibrium") {
  RunConfig c = constant_config(unit_square(), 8, 2.0, 1.0, 0.0);
  c.t_final = 5.0;
  c.output_every = 0.25;
  c.keep_snapshots = true;
  const Trajectory tr = run(c);
  const EquilibriumState eq = equilibrium(2.0, 1.0, 1.0, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& s : tr.snapshots) {
    double d = 0.0;
    for (double v : s.u) d = std::max(d, std::abs(v - eq.u_inf));
    for (double v : s.w) d = std::max(d, std::abs(v - eq.w_inf));
    for (double v : s.z) d = std::max(d, std::abs(v - eq.z_inf));
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("conservation and sign on a short generic run") {
  const SystemParameters p{1.0, 0.5, 0.2, 1.0, 1.0};
  RunConfig c = fixtures::generic(24, p, 0.5);
  for (const auto& r : run(c).rows) {
    CHECK(std::abs(r.dM1_rel) <= 1e-10);
    CHECK(std::abs(r.dM2_rel) <= 1e-10);
    CHECK(std::min({r.u_min, r.w_min, r.z_min}) >= -1e-10);
  }
}

TEST_CASE("initial profiles") {
  RunConfig c = fixtures::generic(16, {}, 0.0);
  c.initial.u.mass = 2.0;
  c.initial.w.mass = 1.0;
  c.initial.z.mass = 0.0;
  const SimulationState s = initial_state(c);
  const MassPair m = masses(s, c.grid, c.preset);
  CHECK(m.M1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.M2 == doctest::Approx(1.0).epsilon(1e-14));

  c.initial.w = FieldProfile{};
  c.initial.w.kind = ProfileKind::table;
  c.initial.w.table.assign(15, 1.0);
  CHECK_THROWS_AS(initial_state(c), ValidationError);

  c = fixtures::generic(16, {}, 0.0);
  c.initial.u.kind = ProfileKind::gaussian;
  c.initial.u.width = 0.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("config validation") {
  RunConfig c = fixtures::generic(8, {}, 1.0);
  c.cfl_safety = 0.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.cfl_safety = 1.2;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = fixtures::generic(8, {}, -1.0);
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = fixtures::generic(8, {}, 1.0);
  c.output_every = 0.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = fixtures::generic(8, {}, 1.0);
  c.grid = make_grid(8, 8, 1.0, 1.0);
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("identical configs give identical rows") {
  MotionPreset breathing;
  breathing.kind = MotionKind::vertical_breathing;
  breathing.amplitude = 0.1;
  breathing.frequency = 1.0;
  RunConfig c = fixtures::generic(12, {1.0, 0.5, 0.2, 1.0, 1.0}, 0.3);
  c.preset = breathing;
  const auto a = run(c).rows;
  const auto b = run(c).rows;
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(format_row(a[k]) == format_row(b[k]));
  CHECK_FALSE(a.back().E.has_value());
}

}
