#include "bsrd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bsrd/error.hpp"

namespace bsrd::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

MotionPreset unit_strip() {
  MotionPreset p;
  p.period = kTwoPi;
  p.height = 1.0;
  return p;
}

/// Derivative of g at s by differences with step h, one-sided (second order)
/// when s +- h leaves [lo, hi].
template <class F>
auto difference(F&& g, double s, double h, double lo, double hi) {
  if (s - h >= lo && s + h <= hi) return (1.0 / (2.0 * h)) * (g(s + h) - g(s - h));
  if (s - h < lo) return (1.0 / (2.0 * h)) * (-3.0 * g(s) + 4.0 * g(s + h) - g(s + 2.0 * h));
  return (1.0 / (2.0 * h)) * (3.0 * g(s) - 4.0 * g(s - h) + g(s - 2.0 * h));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

const char* to_string(OperatorId id) {
  switch (id) {
    case OperatorId::surface_laplacian: return "surface_laplacian";
    case OperatorId::bulk_diffusion: return "bulk_diffusion";
    case OperatorId::surface_advection: return "surface_advection";
  }
  return "unknown";
}

OrderStudy operator_order(OperatorId id, const Field2& exact_field, const Field2& exact_image,
                          std::span<const int> resolutions) {
  if (resolutions.size() < 3) throw ValidationError("operator_order needs at least 3 resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k) {
    if (resolutions[k] != 2 * resolutions[k - 1]) {
      throw ValidationError("operator_order resolutions must double");
    }
  }

  OrderStudy study;
  study.resolutions.assign(resolutions.begin(), resolutions.end());
  const MotionPreset strip = unit_strip();
  const SystemParameters unit;

  for (int n : resolutions) {
    const Grid grid = make_grid(n, n, strip);
    double err = 0.0;
    if (id == OperatorId::bulk_diffusion) {
      SimulationState s = make_state(grid);
      for (int j = 0; j <= grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) s.u[grid.index(i, j)] = exact_field(grid.x(i), grid.y(j));
      const auto lu = bulk_rhs(s, grid, strip, unit);
      for (int j = 1; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
          err = std::max(err, std::abs(lu[grid.index(i, j)] - exact_image(grid.x(i), grid.y(j))));
    } else {
      std::vector<double> f(grid.nx), image(grid.nx);
      for (int i = 0; i < grid.nx; ++i) {
        f[i] = exact_field(grid.x(i), 0.0);
        image[i] = exact_image(grid.x(i), 0.0);
      }
      const auto out = id == OperatorId::surface_laplacian ? surface_laplacian(f, grid)
                                                           : surface_advection(f, grid, 1.0);
      err = max_abs_diff(out, image);
    }
    study.errors.push_back(err);
  }

  study.pass = true;
  for (std::size_t k = 1; k < study.errors.size(); ++k) {
    const double order = std::log2(study.errors[k - 1] / study.errors[k]);
    study.orders.push_back(order);
    if (!(order >= kOrderLow && order <= kOrderHigh)) study.pass = false;
  }
  return study;
}

OrderStudy standard_order_study(OperatorId id, std::span<const int> resolutions) {
  switch (id) {
    case OperatorId::surface_laplacian:
      return operator_order(
          id, [](double x, double) { return std::cos(x); },
          [](double x, double) { return -std::cos(x); }, resolutions);
    case OperatorId::bulk_diffusion:
      return operator_order(
          id, [](double x, double y) { return std::cos(x) * std::cosh(y); },
          [](double, double) { return 0.0; }, resolutions);
    case OperatorId::surface_advection:
      return operator_order(
          id, [](double x, double) { return std::sin(x); },
          [](double x, double) { return std::cos(x); }, resolutions);
  }
  throw ValidationError("unknown operator");
}

JacobiReport check_jacobi(const MotionPreset& preset, std::span<const double> t_samples,
                          std::span<const Vec2> xi_samples) {
  const SystemParameters unit;
  JacobiReport rep;
  const double t_hi = std::isfinite(preset.horizon) ? preset.horizon : 1e300;
  constexpr double kSpace = 1e-3;
  constexpr double kTime = 1e-4;
  constexpr double kJacobianStep = 1e-6;

  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

  for (double t : t_samples) {
    for (Vec2 xi : xi_samples) {
      const GeometrySample g = geometry_sample(preset, t, xi, unit);
      const VelocitySample v = velocity_sample(preset, t, xi);
      rep.analytic_max_rel = std::max(rep.analytic_max_rel, rel(g.J * v.div_V_p, g.dJdt));

      const double dJ_fd = difference(
          [&](double s) { return geometry_sample(preset, s, xi, unit).J; }, t, kJacobianStep, 0.0,
          t_hi);
      rep.fd_time_max_rel = std::max(rep.fd_time_max_rel, rel(dJ_fd, g.dJdt));

      // Flow-map Jacobian by differences of Phi itself.
      auto jacobian_fd = [&](double s, Vec2 p) {
        const Vec2 dx = difference([&](double x) { return flow_map(preset, s, {x, p.y}); }, p.x,
                                   kSpace, 0.0, preset.period);
        const Vec2 dy = difference([&](double y) { return flow_map(preset, s, {p.x, y}); }, p.y,
                                   kSpace, 0.0, preset.height);
        return Mat2{dx.x, dy.x, dx.y, dy.y};
      };
      const Mat2 F = jacobian_fd(t, xi);
      const Mat2 M = inverse(F);
      const double J = F.det();
      const double omega = norm(M.transpose() * Vec2{0.0, -1.0});
      const Vec2 tangent = jacobian_fd(t, {xi.x, 0.0}) * Vec2{1.0, 0.0};

      auto vp_fd = [&](Vec2 p) {
        return difference([&](double s) { return flow_map(preset, s, p); }, t, kTime, 0.0, t_hi);
      };
      const Vec2 vp = vp_fd(xi);
      const Vec2 dvx = difference([&](double x) { return vp_fd({x, xi.y}); }, xi.x, kSpace, 0.0,
                                  preset.period);
      const Vec2 dvy = difference([&](double y) { return vp_fd({xi.x, y}); }, xi.y, kSpace, 0.0,
                                  preset.height);
      const Mat2 grad_vp{dvx.x, dvy.x, dvx.y, dvy.y};
      const Mat2 G = grad_vp * M;
      const double div_fd = G.xx + G.yy;

      const double errs[] = {rel(J, g.J),
                             rel(M.xx, g.M.xx),
                             rel(M.xy, g.M.xy),
                             rel(M.yx, g.M.yx),
                             rel(M.yy, g.M.yy),
                             rel(omega, g.omega),
                             rel(norm(tangent), g.surface_len),
                             rel(vp.x, v.V_p.x),
                             rel(vp.y, v.V_p.y),
                             rel(div_fd, v.div_V_p)};
      for (double e : errs) rep.fd_geometry_max = std::max(rep.fd_geometry_max, e);

      const VelocitySample vs = velocity_sample(preset, t, {xi.x, 0.0});
      rep.compatibility_max =
          std::max(rep.compatibility_max, std::abs(dot(vs.V_p - vs.V_Gamma, vs.nu)));
    }
  }
  rep.pass = rep.analytic_max_rel <= kJacobiAnalyticTol && rep.fd_time_max_rel <= kJacobiFdTol &&
             rep.fd_geometry_max <= kJacobiFdTol && rep.compatibility_max <= kCompatibilityTol;
  return rep;
}

std::vector<double> spectral_second_derivative(std::span<const double> f, double period) {
  const std::size_t n = f.size();
  std::vector<double> re(n, 0.0), im(n, 0.0), cs(n), sn(n);
  for (std::size_t k = 0; k < n; ++k) {
    cs[k] = std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    sn[k] = std::sin(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t idx = (k * m) % n;
      re[k] += f[m] * cs[idx];
      im[k] -= f[m] * sn[idx];
    }
    const double kk = static_cast<double>(k) - (k <= n / 2 ? 0.0 : static_cast<double>(n));
    const double wave = kk * kTwoPi / period;
    re[k] *= -wave * wave;
    im[k] *= -wave * wave;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = (k * m) % n;
      acc += re[k] * cs[idx] - im[k] * sn[idx];
    }
    out[m] = acc / static_cast<double>(n);
  }
  return out;
}

double cross_diffusion_residual(std::span<const SimulationState> snapshots, const Grid& grid,
                                const SystemParameters& params) {
  if (snapshots.size() < 2) throw ValidationError("cross_diffusion_residual needs >= 2 snapshots");
  const double period = grid.dx * grid.nx;
  const double dG = params.delta_gamma;
  const double dGp = params.delta_gamma_p;

  auto rhs = [&](const SimulationState& s) {
    std::vector<double> v(s.w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.w[i] + s.z[i];
    const auto v2 = spectral_second_derivative(v, period);
    const auto w2 = spectral_second_derivative(s.w, period);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = dGp * v2[i] + (dG - dGp) * w2[i];
    return out;
  };

  double worst = 0.0;
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const SimulationState& a = snapshots[k - 1];
    const SimulationState& b = snapshots[k];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) throw ValidationError("snapshots must be strictly time-ordered");
    const auto ra = rhs(a);
    const auto rb = rhs(b);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const double dv = ((b.w[i] + b.z[i]) - (a.w[i] + a.z[i])) / dt;
      worst = std::max(worst, std::abs(dv - 0.5 * (ra[i] + rb[i])));
    }
  }
  return worst;
}

CrossDiffusionStudy cross_diffusion_study(const RunConfig& config, std::span<const int> resolutions,
                                          double t_probe) {
  if (resolutions.size() < 2) throw ValidationError("cross_diffusion_study needs >= 2 resolutions");
  if (!config.preset.is_stationary()) {
    throw ValidationError("cross-diffusion audit runs on the stationary preset");
  }
  CrossDiffusionStudy study;
  study.resolutions.assign(resolutions.begin(), resolutions.end());
  for (int n : resolutions) {
    RunConfig c = config;
    c.grid = make_grid(n, n, c.preset);
    c.t_final = t_probe;
    c.output_every = t_probe > 0.0 ? t_probe : 1.0;
    SimulationState last;
    run(c, [&](const SimulationState& s, const DiagnosticsRow&) { last = s; });
    const double dt = cfl_dt(c.grid, c.preset, c.params, last.t, c.cfl_safety);
    SimulationState next = last;
    Stepper(c.grid, c.preset, c.params).advance(next, dt);
    const SimulationState pair[] = {last, next};
    study.residuals.push_back(cross_diffusion_residual(pair, c.grid, c.params));
    study.scales.push_back(c.grid.dx * c.grid.dx + dt);
  }
  const std::size_t m = study.residuals.size();
  study.ratio = study.residuals[m - 2] / study.residuals[m - 1];
  study.constant = 10.0 * study.residuals[m - 1] / study.scales[m - 1];
  study.within_bound = true;
  for (std::size_t k = 0; k < m; ++k) {
    if (study.residuals[k] > study.constant * study.scales[k]) study.within_bound = false;
  }
  return study;
}

MaxPrincipleReport max_principle_check(std::span<const SimulationState> snapshots,
                                       const SystemParameters& params) {
  if (params.delta_gamma != params.delta_gamma_p) {
    throw ValidationError("max_principle_check requires delta_gamma == delta_gamma_p");
  }
  if (snapshots.empty()) throw ValidationError("max_principle_check needs snapshots");
  auto vmax = [](const SimulationState& s) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.w.size(); ++i) m = std::max(m, s.w[i] + s.z[i]);
    return m;
  };
  MaxPrincipleReport rep;
  rep.bound = vmax(snapshots.front());
  rep.max_v = rep.bound;
  for (const auto& s : snapshots) rep.max_v = std::max(rep.max_v, vmax(s));
  rep.pass = rep.max_v <= rep.bound + kMaxPrincipleTol;
  return rep;
}

HomogeneousTrajectory homogeneous_ode_oracle(const SystemParameters& params, double u0, double w0,
                                             double z0, double ratio, double T,
                                             double sample_every, double dt_ref) {
  if (u0 < 0.0 || w0 < 0.0 || z0 < 0.0) throw DomainError("oracle needs non-negative constants");
  struct Y {
    double u, w, z;
  };
  auto f = [&](const Y& y) {
    const double r = y.z / params.delta_kp - y.u * y.w / params.delta_k;
    return Y{ratio * r, r, -r};
  };
  auto axpy = [](const Y& y, double h, const Y& k) {
    return Y{y.u + h * k.u, y.w + h * k.w, y.z + h * k.z};
  };

  HomogeneousTrajectory traj;
  Y y{u0, w0, z0};
  double t = 0.0;
  auto record = [&] {
    traj.t.push_back(t);
    traj.u.push_back(y.u);
    traj.w.push_back(y.w);
    traj.z.push_back(y.z);
  };
  record();
  for (long k = 1; t < T; ++k) {
    const double target = std::min(static_cast<double>(k) * sample_every, T);
    const long steps = std::max(1L, static_cast<long>(std::ceil((target - t) / dt_ref - 1e-9)));
    const double h = (target - t) / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const Y k1 = f(y);
      const Y k2 = f(axpy(y, 0.5 * h, k1));
      const Y k3 = f(axpy(y, 0.5 * h, k2));
      const Y k4 = f(axpy(y, h, k3));
      y = Y{y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
            y.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
    }
    t = target;
    record();
  }
  return traj;
}

namespace {

/// Positive perturbation shape with unit L2 norm under the t = 0 quadrature.
SimulationState perturbation_shape(const RunConfig& c) {
  SimulationState s = make_state(c.grid);
  for (int j = 0; j <= c.grid.ny; ++j)
    for (int i = 0; i < c.grid.nx; ++i)
      s.u[c.grid.index(i, j)] = 1.0 + 0.5 * std::cos(kTwoPi * c.grid.x(i) / c.preset.period);
  for (int i = 0; i < c.grid.nx; ++i) {
    s.w[i] = 1.0 + 0.5 * std::sin(kTwoPi * c.grid.x(i) / c.preset.period);
    s.z[i] = 0.5;
  }
  const auto wb = bulk_weights(c.grid, c.preset, 0.0);
  const auto ws = surface_weights(c.grid, c.preset, 0.0);
  double n2 = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) n2 += s.u[k] * s.u[k] * wb[k];
  for (std::size_t k = 0; k < ws.size(); ++k) n2 += (s.w[k] * s.w[k] + s.z[k] * s.z[k]) * ws[k];
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : s.u) v *= inv;
  for (double& v : s.w) v *= inv;
  for (double& v : s.z) v *= inv;
  return s;
}

double l2_distance(const SimulationState& a, const SimulationState& b, const Grid& grid,
                   const MotionPreset& preset) {
  const auto wb = bulk_weights(grid, preset, a.t);
  const auto ws = surface_weights(grid, preset, a.t);
  double n2 = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) n2 += (a.u[k] - b.u[k]) * (a.u[k] - b.u[k]) * wb[k];
  for (std::size_t k = 0; k < ws.size(); ++k) {
    n2 += ((a.w[k] - b.w[k]) * (a.w[k] - b.w[k]) + (a.z[k] - b.z[k]) * (a.z[k] - b.z[k])) * ws[k];
  }
  return std::sqrt(n2);
}

SimulationState final_state(const RunConfig& c) {
  SimulationState last;
  run(c, [&](const SimulationState& s, const DiagnosticsRow&) { last = s; });
  return last;
}

}  // namespace

DependenceProbe continuous_dependence_probe(const RunConfig& config, double epsilon) {
  return continuous_dependence_probe(config, epsilon, final_state(config));
}

DependenceProbe continuous_dependence_probe(const RunConfig& config, double epsilon,
                                            const SimulationState& base_final) {
  DependenceProbe probe;
  if (epsilon == 0.0) return probe;

  const SimulationState base0 = initial_state(config);
  const SimulationState shape = perturbation_shape(config);
  RunConfig perturbed = config;
  auto as_table = [](const std::vector<double>& base, const std::vector<double>& dir, double eps) {
    FieldProfile p;
    p.kind = ProfileKind::table;
    p.table.resize(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) p.table[k] = base[k] + eps * dir[k];
    return p;
  };
  perturbed.initial.u = as_table(base0.u, shape.u, epsilon);
  perturbed.initial.w = as_table(base0.w, shape.w, epsilon);
  perturbed.initial.z = as_table(base0.z, shape.z, epsilon);

  const SimulationState pert0 = initial_state(perturbed);
  probe.diff0 = l2_distance(base0, pert0, config.grid, config.preset);
  const SimulationState pertT = final_state(perturbed);
  probe.diffT = l2_distance(base_final, pertT, config.grid, config.preset);
  probe.factor = probe.diff0 > 0.0 ? probe.diffT / probe.diff0 : 0.0;
  return probe;
}

EquilibriumState equilibrium_newton(double M1, double M2, double area, double len) {
  if (!(M1 >= 0.0) || !(M2 >= 0.0) || !(area > 0.0) || !(len > 0.0)) {
    throw DomainError("equilibrium_newton: invalid masses or measures");
  }
  double u = M1 / area, w = M2 / len, z = 0.0;
  auto residual = [&](double uu, double ww, double zz) {
    const double f1 = area * uu + len * zz - M1;
    const double f2 = len * (ww + zz) - M2;
    const double f3 = uu * ww - zz;
    return std::sqrt(f1 * f1 + f2 * f2 + f3 * f3);
  };
  for (int it = 0; it < 200; ++it) {
    const double f1 = area * u + len * z - M1;
    const double f2 = len * (w + z) - M2;
    const double f3 = u * w - z;
    // Jacobian rows: [area 0 len], [0 len len], [w u -1]; Cramer's rule.
    const double a11 = area, a12 = 0.0, a13 = len;
    const double a21 = 0.0, a22 = len, a23 = len;
    const double a31 = w, a32 = u, a33 = -1.0;
    const double det = a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                       a13 * (a21 * a32 - a22 * a31);
    const double b1 = -f1, b2 = -f2, b3 = -f3;
    const double du = (b1 * (a22 * a33 - a23 * a32) - a12 * (b2 * a33 - a23 * b3) +
                       a13 * (b2 * a32 - a22 * b3)) / det;
    const double dw = (a11 * (b2 * a33 - a23 * b3) - b1 * (a21 * a33 - a23 * a31) +
                       a13 * (a21 * b3 - b2 * a31)) / det;
    const double dz = (a11 * (a22 * b3 - b2 * a32) - a12 * (a21 * b3 - b2 * a31) +
                       b1 * (a21 * a32 - a22 * a31)) / det;
    double step = 1.0;
    while (step > 1e-6 && (u + step * du < 0.0 || w + step * dw < 0.0 || z + step * dz < 0.0)) {
      step *= 0.5;
    }
    u += step * du;
    w += step * dw;
    z += step * dz;
    if (residual(u, w, z) <= 1e-15 * std::max({1.0, M1, M2})) break;
  }
  return {u, w, z};
}

std::vector<std::string> suite_names() {
  return {"operators",   "geometry",      "equilibrium",     "homogeneous", "inequalities",
          "conservation", "max-principle", "cross-diffusion", "dependence",  "nondim"};
}

namespace {

RunConfig light_config(int nx, int ny, const SystemParameters& params, double T) {
  RunConfig c;
  c.preset = unit_strip();
  c.grid = make_grid(nx, ny, c.preset);
  c.params = params;
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

void add(std::vector<SuiteResult>& out, std::string name, bool ok, std::string detail) {
  out.push_back({std::move(name), ok, std::move(detail)});
}

void suite_operators(std::vector<SuiteResult>& out) {
  const int res[] = {16, 32, 64};
  for (OperatorId id : {OperatorId::surface_laplacian, OperatorId::bulk_diffusion,
                        OperatorId::surface_advection}) {
    const OrderStudy s = standard_order_study(id, res);
    std::string detail = "orders";
    for (double o : s.orders) detail += " " + fmt(o);
    add(out, std::string("operators/") + to_string(id), s.pass, detail);
  }
}

void suite_geometry(std::vector<SuiteResult>& out) {
  const double ts[] = {0.0, 0.3, 1.1, 2.5};
  const Vec2 xis[] = {{0.0, 0.0}, {1.0, 0.3}, {3.0, 0.7}, {6.0, 1.0}};
  MotionPreset breathing = unit_strip();
  breathing.kind = MotionKind::vertical_breathing;
  breathing.amplitude = 0.1;
  breathing.frequency = 1.0;
  MotionPreset tangential = unit_strip();
  tangential.kind = MotionKind::tangential_flow;
  tangential.v_tau = 0.5;
  for (const MotionPreset& p : {unit_strip(), breathing, tangential}) {
    const JacobiReport r = check_jacobi(p, ts, xis);
    add(out, std::string("geometry/") + to_string(p.kind), r.pass,
        "analytic " + fmt(r.analytic_max_rel) + " fd " + fmt(r.fd_time_max_rel) + " fd-geom " +
            fmt(r.fd_geometry_max) + " compat " + fmt(r.compatibility_max));
  }
}

void suite_equilibrium(std::vector<SuiteResult>& out) {
  const double cases[][4] = {{2.0, 1.0, 1.0, 1.0}, {0.0, 3.0, 2.0, 1.0}, {5.0, 0.0, 1.0, 2.0},
                             {7.3, 2.1, 6.28, 6.28}, {1e-3, 50.0, 1.0, 4.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const EquilibriumState a = equilibrium(c[0], c[1], c[2], c[3]);
    const EquilibriumState b = equilibrium_newton(c[0], c[1], c[2], c[3]);
    const double scale = std::max({1.0, c[0], c[1]});
    worst = std::max({worst, std::abs(a.u_inf - b.u_inf) / scale, std::abs(a.w_inf - b.w_inf) / scale,
                      std::abs(a.z_inf - b.z_inf) / scale,
                      std::abs(c[2] * a.u_inf + c[3] * a.z_inf - c[0]) / scale,
                      std::abs(c[3] * (a.w_inf + a.z_inf) - c[1]) / scale,
                      std::abs(a.u_inf * a.w_inf - a.z_inf) / scale});
  }
  add(out, "equilibrium/closed-form-vs-newton", worst <= 1e-12, "max deviation " + fmt(worst));
}

void suite_homogeneous(std::vector<SuiteResult>& out) {
  const SystemParameters unit;
  const auto ode = homogeneous_ode_oracle(unit, 2.0, 1.0, 0.0, 1.0, 10.0, 1.0);
  const EquilibriumState eq = equilibrium(2.0, 1.0, 1.0, 1.0);
  const double end_err = std::max({std::abs(ode.u.back() - eq.u_inf), std::abs(ode.w.back() - eq.w_inf),
                                   std::abs(ode.z.back() - eq.z_inf)});
  add(out, "homogeneous/oracle-vs-equilibrium", end_err <= 1e-6, "endpoint error " + fmt(end_err));

  RunConfig c = light_config(8, 8, unit, 10.0);
  c.initial.u = FieldProfile{};
  c.initial.u.value = 2.0;
  c.initial.w = FieldProfile{};
  c.initial.w.value = 1.0;
  c.initial.z = FieldProfile{};
  c.cfl_safety = 1.0;
  const auto traj = run(c);
  const DiagnosticsRow& last = traj.rows.back();
  const double pde_err = std::max({std::abs(last.u_max - ode.u.back()), std::abs(last.u_min - ode.u.back()),
                                   std::abs(last.w_max - ode.w.back()), std::abs(last.z_max - ode.z.back())});
  add(out, "homogeneous/pde-vs-oracle", pde_err <= 1e-6, "T=10 error " + fmt(pde_err));
}

void suite_inequalities(std::vector<SuiteResult>& out) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> logu(std::log(1e-6), std::log(1e6));
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const XlogGap g = xlog_gap(std::exp(logu(rng)), std::exp(logu(rng)));
    worst = std::min(worst, g.gap - g.bound);
  }
  add(out, "inequalities/xlog", worst >= -1e-12, "min(gap - bound) " + fmt(worst));

  std::uniform_real_distribution<double> val(0.0, 3.0);
  double ckp_worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(64), w(64, 2.0 * std::numbers::pi / 64.0);
    for (double& v : f) v = val(rng);
    const CkpGap g = ckp_gap(f, w);
    ckp_worst = std::min(ckp_worst, g.lhs - g.rhs);
  }
  add(out, "inequalities/ckp", ckp_worst >= -1e-10, "min(lhs - rhs) " + fmt(ckp_worst));
}

void suite_conservation(std::vector<SuiteResult>& out) {
  const SystemParameters p{1.0, 0.5, 0.2, 1.0, 1.0};
  RunConfig c = light_config(32, 16, p, 1.0);
  const auto a = run(c);
  double drift = 0.0;
  for (const auto& r : a.rows) drift = std::max({drift, std::abs(r.dM1_rel), std::abs(r.dM2_rel)});
  add(out, "conservation/stationary", drift <= 1e-6, "max drift " + fmt(drift));

  c.preset.kind = MotionKind::vertical_breathing;
  c.preset.amplitude = 0.1;
  c.preset.frequency = 1.0;
  const auto b = run(c);
  drift = 0.0;
  for (const auto& r : b.rows) drift = std::max({drift, std::abs(r.dM1_rel), std::abs(r.dM2_rel)});
  add(out, "conservation/vertical_breathing", drift <= 1e-4, "max drift " + fmt(drift));
}

void suite_max_principle(std::vector<SuiteResult>& out) {
  const SystemParameters p{1.0, 0.3, 0.3, 1.0, 1.0};
  RunConfig c = light_config(32, 16, p, 0.5);
  c.keep_snapshots = true;
  const auto traj = run(c);
  const MaxPrincipleReport r = max_principle_check(traj.snapshots, p);
  add(out, "max-principle", r.pass, "max(w+z) " + fmt(r.max_v) + " bound " + fmt(r.bound));
}

void suite_cross_diffusion(std::vector<SuiteResult>& out) {
  const SystemParameters p{1.0, 0.5, 0.2, 1.0, 1.0};
  RunConfig c = light_config(32, 32, p, 0.02);
  const int res[] = {32, 64};
  const CrossDiffusionStudy s = cross_diffusion_study(c, res, 0.02);
  const bool ok = s.ratio >= 3.2 && s.ratio <= 4.8 && s.within_bound;
  add(out, "cross-diffusion", ok, "residual ratio " + fmt(s.ratio));
}

void suite_dependence(std::vector<SuiteResult>& out) {
  const SystemParameters p{1.0, 0.5, 0.5, 1.0, 1.0};
  RunConfig c = light_config(16, 8, p, 2.0);
  c.cfl_safety = 1.0;
  SimulationState base;
  run(c, [&](const SimulationState& s, const DiagnosticsRow&) { base = s; });
  const DependenceProbe a = continuous_dependence_probe(c, 1e-3, base);
  const DependenceProbe b = continuous_dependence_probe(c, 1e-4, base);
  const double rel = std::abs(a.factor - b.factor) / b.factor;
  add(out, "dependence/linear-response", rel <= 0.1,
      "factors " + fmt(a.factor) + " / " + fmt(b.factor));
}

void suite_nondim(std::vector<SuiteResult>& out) {
  DimensionalParameters d{0.7, 0.02, 0.011, 3.5, 0.25, 2.0, 13.0, 0.4, 1.7, 0.9};
  const NondimensionalResult nd = nondimensionalize(d);
  const DimensionalParameters back = redimensionalize(nd.params, d);
  const double worst = std::max({std::abs(back.D_L / d.D_L - 1.0), std::abs(back.D_Gamma / d.D_Gamma - 1.0),
                                 std::abs(back.D_GammaP / d.D_GammaP - 1.0), std::abs(back.k_on / d.k_on - 1.0),
                                 std::abs(back.k_off / d.k_off - 1.0)});
  add(out, "nondim/round-trip", worst <= 1e-12, "max rel error " + fmt(worst));
}

}  // namespace

std::vector<SuiteResult> run_suites(const std::string& name) {
  std::vector<SuiteResult> out;
  const bool all = name == "all";
  bool matched = all;
  auto want = [&](const char* s) {
    if (all || name == s) {
      matched = true;
      return true;
    }
    return false;
  };
  if (want("operators")) suite_operators(out);
  if (want("geometry")) suite_geometry(out);
  if (want("equilibrium")) suite_equilibrium(out);
  if (want("homogeneous")) suite_homogeneous(out);
  if (want("inequalities")) suite_inequalities(out);
  if (want("conservation")) suite_conservation(out);
  if (want("max-principle")) suite_max_principle(out);
  if (want("cross-diffusion")) suite_cross_diffusion(out);
  if (want("dependence")) suite_dependence(out);
  if (want("nondim")) suite_nondim(out);
  if (!matched) throw ValidationError("unknown verification suite '" + name + "'");
  return out;
}

}  // namespace bsrd::verify
