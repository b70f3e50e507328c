#include <cmath>
#include <numbers>
#include <random>

#include "bsrd/discretization.hpp"
#include "bsrd/error.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/timestepper.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bsrd;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_err(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

SimulationState random_state(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  SimulationState s = make_state(g);
  for (double& v : s.u) v = pos(rng);
  for (double& v : s.w) v = pos(rng);
  for (double& v : s.z) v = pos(rng);
  return s;
}

}  // namespace

TEST_SUITE("discretization") {

TEST_CASE("grid layout") {
  const Grid g = make_grid(8, 5, kTwoPi, 2.0);
  CHECK(g.dx == doctest::Approx(kTwoPi / 8));
  CHECK(g.dy == doctest::Approx(0.4));
  CHECK(g.bulk_size() == 8u * 6u);
  CHECK(g.surface_size() == 8u);
  CHECK(g.index(3, 2) == 19u);
  CHECK_THROWS_AS(make_grid(3, 8, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(make_grid(8, 2, 1.0, 1.0), ValidationError);
}

TEST_CASE("reaction") {
  SystemParameters p;
  CHECK(reaction(0.0, 0.0, 0.0, p) == 0.0);
  CHECK(reaction(1.0, 1.0, 1.0, p) == 0.0);
  p.delta_k = 2.0;
  p.delta_kp = 4.0;
  CHECK(reaction(2.0, 3.0, 1.0, p) == -2.75);
}

TEST_CASE("robin flux") {
  SystemParameters p;
  CHECK(robin_flux(0.0, 0.0, 0.0, 0.0, p) == 0.0);
  CHECK(robin_flux(1.0, 1.0, 1.0, 0.0, p) == 0.0);
  CHECK(robin_flux(2.0, 1.0, 0.0, 0.5, p) == -1.0);
}

TEST_CASE("surface Laplacian") {
  SUBCASE("constants are annihilated") {
    const Grid g = make_grid(32, 4, kTwoPi, 1.0);
    const std::vector<double> f(32, 3.7);
    for (double v : surface_laplacian(f, g)) CHECK(std::abs(v) <= 1e-13);
  }
  SUBCASE("cos x converges at second order") {
    double prev = 0.0;
    for (int n : {16, 32, 64, 128}) {
      const Grid g = make_grid(n, 4, kTwoPi, 1.0);
      std::vector<double> f(n), exact(n);
      for (int i = 0; i < n; ++i) {
        f[i] = std::cos(g.x(i));
        exact[i] = -f[i];
      }
      const double e = max_err(surface_laplacian(f, g), exact);
      if (prev > 0.0) {
        CHECK(prev / e >= 3.5);
        CHECK(prev / e <= 4.5);
      }
      prev = e;
    }
  }
  SUBCASE("constant metric len = 2 scales by 1/4") {
    const int n = 256;
    const Grid g = make_grid(n, 4, kTwoPi, 1.0);
    std::vector<double> f(n), exact(n);
    for (int i = 0; i < n; ++i) {
      f[i] = std::cos(g.x(i));
      exact[i] = -f[i] / 4.0;
    }
    CHECK(max_err(surface_laplacian(f, g, 2.0), exact) <= 1e-4 * 0.25);
  }
  SUBCASE("size mismatch") {
    const Grid g = make_grid(16, 4, kTwoPi, 1.0);
    const std::vector<double> f(15, 0.0);
    CHECK_THROWS_AS(surface_laplacian(f, g), ValidationError);
    CHECK_THROWS_AS(surface_advection(f, g, 1.0), ValidationError);
  }
}

TEST_CASE("bulk operator") {
  const MotionPreset strip;
  SUBCASE("steady constants") {
    const Grid g = make_grid(16, 8, strip);
    SimulationState s = make_state(g);
    std::fill(s.u.begin(), s.u.end(), 2.0);
    std::fill(s.w.begin(), s.w.end(), 0.5);
    std::fill(s.z.begin(), s.z.end(), 1.0);
    for (double v : bulk_rhs(s, g, strip, {})) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("equals the 5-point Laplacian in the interior") {
    SystemParameters p;
    p.delta_omega = 0.7;
    const Grid g = make_grid(12, 10, strip);
    const SimulationState s = random_state(g, 17);
    const auto lu = bulk_rhs(s, g, strip, p);
    for (int j = 1; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int ip = (i + 1) % g.nx, im = (i + g.nx - 1) % g.nx;
        const double c = s.u[g.index(i, j)];
        const double lap = (s.u[g.index(ip, j)] - 2 * c + s.u[g.index(im, j)]) / (g.dx * g.dx) +
                           (s.u[g.index(i, j + 1)] - 2 * c + s.u[g.index(i, j - 1)]) / (g.dy * g.dy);
        CHECK(lu[g.index(i, j)] == doctest::Approx(0.7 * lap).epsilon(1e-12));
      }
    }
  }
  SUBCASE("harmonic residual shrinks by 4 per halving") {
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
      const Grid g = make_grid(n, n, strip);
      SimulationState s = make_state(g);
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) s.u[g.index(i, j)] = std::cos(g.x(i)) * std::cosh(g.y(j));
      const auto lu = bulk_rhs(s, g, strip, {});
      double e = 0.0;
      for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i) e = std::max(e, std::abs(lu[g.index(i, j)]));
      if (prev > 0.0) {
        CHECK(prev / e >= 3.5);
        CHECK(prev / e <= 4.5);
      }
      prev = e;
    }
  }
  SUBCASE("linear in u when the reaction vanishes") {
    const Grid g = make_grid(10, 6, strip);
    SimulationState a = random_state(g, 1), b = random_state(g, 2), c = make_state(g);
    std::fill(a.w.begin(), a.w.end(), 0.0);
    std::fill(a.z.begin(), a.z.end(), 0.0);
    b.w = a.w;
    b.z = a.z;
    c.w = a.w;
    c.z = a.z;
    for (std::size_t k = 0; k < c.u.size(); ++k) c.u[k] = 1.5 * a.u[k] - 0.25 * b.u[k];
    const auto la = bulk_rhs(a, g, strip, {}), lb = bulk_rhs(b, g, strip, {}),
               lc = bulk_rhs(c, g, strip, {});
    for (std::size_t k = 0; k < lc.size(); ++k) {
      CHECK(lc[k] == doctest::Approx(1.5 * la[k] - 0.25 * lb[k]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("surface operator") {
  const MotionPreset strip;
  SUBCASE("constant balanced state is steady") {
    SystemParameters p;
    p.delta_k = 2.0;
    p.delta_kp = 0.5;
    const Grid g = make_grid(16, 4, strip);
    SimulationState s = make_state(g);
    std::fill(s.u.begin(), s.u.end(), 0.8);
    std::fill(s.w.begin(), s.w.end(), 1.5);
    // u w / delta_k = z / delta_kp
    std::fill(s.z.begin(), s.z.end(), 0.8 * 1.5 * 0.5 / 2.0);
    const SurfaceRates r = surface_rhs(s, g, strip, p);
    for (std::size_t i = 0; i < r.dw.size(); ++i) {
      CHECK(std::abs(r.dw[i]) <= 1e-14);
      CHECK(std::abs(r.dz[i]) <= 1e-14);
    }
  }
  SUBCASE("equal diffusivities: v = w + z solves the heat equation") {
    SystemParameters p;
    p.delta_gamma = p.delta_gamma_p = 0.3;
    const Grid g = make_grid(24, 4, strip);
    SimulationState s = random_state(g, 9);
    std::fill(s.u.begin(), s.u.end(), 0.0);
    const SurfaceRates r = surface_rhs(s, g, strip, p);
    std::vector<double> v(s.w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.w[i] + s.z[i];
    const auto lv = surface_laplacian(v, g);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(r.dw[i] + r.dz[i] == doctest::Approx(0.3 * lv[i]).epsilon(1e-12).scale(1.0));
    }
  }
  SUBCASE("cross-diffusion structure of the v equation") {
    SystemParameters p{1.0, 0.8, 0.15, 1.3, 0.7};
    const Grid g = make_grid(24, 4, strip);
    const SimulationState s = random_state(g, 10);
    const SurfaceRates r = surface_rhs(s, g, strip, p);
    std::vector<double> v(s.w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.w[i] + s.z[i];
    const auto lv = surface_laplacian(v, g);
    const auto lw = surface_laplacian(s.w, g);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double rhs = 0.15 * lv[i] + (0.8 - 0.15) * lw[i];
      CHECK(r.dw[i] + r.dz[i] == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("tangential advection translates the profile") {
  // vanishing diffusivities, no complexes and no ligand, so r = 0
  const SystemParameters p{1e-300, 1e-300, 1e-300, 1.0, 1.0};
  MotionPreset flow;
  flow.kind = MotionKind::tangential_flow;
  flow.v_tau = 1.0;
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const Grid g = make_grid(n, 4, flow);
    SimulationState s = make_state(g);
    for (int i = 0; i < n; ++i) s.w[i] = 1.0 + 0.5 * std::sin(g.x(i));
    const std::vector<double> w0 = s.w;
    Stepper stepper(g, flow, p);
    const int steps = 8 * n;
    const double dt = flow.period / steps;
    for (int k = 0; k < steps; ++k) stepper.advance(s, dt);
    const double e = max_err(s.w, w0);
    CHECK(e < 0.05);
    if (prev > 0.0) {
      CHECK(prev / e >= 3.5);
      CHECK(prev / e <= 4.5);
    }
    prev = e;
    for (double z : s.z) CHECK(z == 0.0);
  }
}

TEST_CASE("discrete mass balance of the right-hand sides") {
  MotionPreset breathing;
  breathing.kind = MotionKind::vertical_breathing;
  breathing.amplitude = 0.3;
  breathing.frequency = 1.4;
  MotionPreset flow;
  flow.kind = MotionKind::tangential_flow;
  flow.v_tau = 0.8;
  const SystemParameters p{0.9, 0.4, 0.25, 1.2, 0.6};
  for (const MotionPreset& preset : {MotionPreset{}, breathing, flow}) {
    for (double t : {0.0, 0.7, 2.9}) {
      const Grid g = make_grid(20, 12, preset);
      SimulationState s = random_state(g, 100 + static_cast<std::uint64_t>(10 * t));
      s.t = t;
      const auto du = bulk_rhs(s, g, preset, p);
      const SurfaceRates sr = surface_rhs(s, g, preset, p);

      double dm1 = 0.0, dm2 = 0.0, scale = 0.0;
      for (int j = 0; j <= g.ny; ++j) {
        const GeometrySample gs = geometry_sample(preset, t, {0.0, g.y(j)}, p);
        for (int i = 0; i < g.nx; ++i) {
          const std::size_t k = g.index(i, j);
          const double cell = g.dx * g.dy * g.row_weight(j);
          dm1 += (gs.J * du[k] + s.u[k] * gs.dJdt) * cell;
          scale += std::abs(gs.J * du[k]) * cell;
        }
      }
      const GeometrySample g0 = geometry_sample(preset, t, {0.0, 0.0}, p);
      for (int i = 0; i < g.nx; ++i) {
        const double dz = (g0.surface_len * sr.dz[i] + s.z[i] * g0.dlen_dt) * g.dx;
        const double dw = (g0.surface_len * sr.dw[i] + s.w[i] * g0.dlen_dt) * g.dx;
        dm1 += dz;
        dm2 += dz + dw;
        scale += std::abs(dz) + std::abs(dw);
      }
      CHECK(std::abs(dm1) <= 1e-12 * scale);
      CHECK(std::abs(dm2) <= 1e-12 * scale);
    }
  }
}

}
