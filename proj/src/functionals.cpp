#include "bsrd/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsrd/error.hpp"

namespace bsrd {

namespace {

void require_stationary(const MotionPreset& preset, const char* what) {
  if (!preset.is_stationary()) {
    throw DomainError(std::string(what) + " is only defined on the stationary preset");
  }
}

/// Clamp round-off negatives, reject real ones.
double admissible(double v, const char* field) {
  if (v >= 0.0) return v;
  if (v > -kNegativeSlack) return 0.0;
  throw DomainError(std::string(field) + " has negative entries (" + std::to_string(v) + ")");
}

double xlogx_minus_x(double v) { return v > 0.0 ? v * (std::log(v) - 1.0) : 0.0; }

double relative_term(double f, double f_inf) {
  if (f_inf <= 0.0) return xlogx_minus_x(f) - xlogx_minus_x(f_inf);
  if (f <= 0.0) return f_inf;
  return f * std::log(f / f_inf) - f + f_inf;
}

}  // namespace

std::vector<double> bulk_weights(const Grid& grid, const MotionPreset& preset, double t) {
  const SystemParameters unit;
  std::vector<double> w(grid.bulk_size());
  for (int j = 0; j <= grid.ny; ++j) {
    const double J = geometry_sample(preset, t, {0.0, grid.y(j)}, unit).J;
    const double wj = J * grid.dx * grid.dy * grid.row_weight(j);
    std::fill_n(w.begin() + static_cast<std::ptrdiff_t>(grid.index(0, j)), grid.nx, wj);
  }
  return w;
}

std::vector<double> surface_weights(const Grid& grid, const MotionPreset& preset, double t) {
  const SystemParameters unit;
  const double len = geometry_sample(preset, t, {0.0, 0.0}, unit).surface_len;
  return std::vector<double>(grid.surface_size(), len * grid.dx);
}

DomainMeasures domain_measures(const Grid& grid, const MotionPreset& preset, double t) {
  DomainMeasures m;
  for (double w : bulk_weights(grid, preset, t)) m.area_omega += w;
  for (double w : surface_weights(grid, preset, t)) m.len_gamma += w;
  return m;
}

MassPair masses(const SimulationState& s, const Grid& grid, const MotionPreset& preset) {
  validate(s, grid);
  const auto wb = bulk_weights(grid, preset, s.t);
  const auto ws = surface_weights(grid, preset, s.t);
  double bulk = 0.0, w = 0.0, z = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) bulk += s.u[k] * wb[k];
  for (std::size_t k = 0; k < ws.size(); ++k) {
    w += s.w[k] * ws[k];
    z += s.z[k] * ws[k];
  }
  return {bulk + z, w + z};
}

double entropy(const SimulationState& s, const Grid& grid, const MotionPreset& preset) {
  require_stationary(preset, "entropy");
  validate(s, grid);
  const auto wb = bulk_weights(grid, preset, s.t);
  const auto ws = surface_weights(grid, preset, s.t);
  double e = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) e += xlogx_minus_x(admissible(s.u[k], "u")) * wb[k];
  for (std::size_t k = 0; k < ws.size(); ++k) {
    e += xlogx_minus_x(admissible(s.w[k], "w")) * ws[k];
    e += xlogx_minus_x(admissible(s.z[k], "z")) * ws[k];
  }
  return e;
}

bool entropy_regime(const SystemParameters& p) {
  return p.delta_omega == 1.0 && p.delta_k == 1.0 && p.delta_kp == 1.0;
}

DissipationTerms dissipation(const SimulationState& s, const Grid& grid,
                             const MotionPreset& preset, const SystemParameters& params) {
  require_stationary(preset, "dissipation");
  if (!entropy_regime(params)) {
    throw DomainError("dissipation requires delta_omega = delta_k = delta_kp = 1");
  }
  validate(s, grid);
  const int nx = grid.nx;
  const int ny = grid.ny;
  const auto wb = bulk_weights(grid, preset, s.t);
  const auto ws = surface_weights(grid, preset, s.t);
  const double len = ws[0] / grid.dx;

  std::vector<double> u(s.u.size());
  std::transform(s.u.begin(), s.u.end(), u.begin(), [](double v) { return admissible(v, "u"); });
  auto at = [&](int i, int j) { return u[grid.index((i + nx) % nx, j)]; };

  DissipationTerms d;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double gx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.dx);
      double gy;
      if (j == 0) {
        gy = (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * grid.dy);
      } else if (j == ny) {
        gy = (3.0 * at(i, ny) - 4.0 * at(i, ny - 1) + at(i, ny - 2)) / (2.0 * grid.dy);
      } else {
        gy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.dy);
      }
      d.bulk += (gx * gx + gy * gy) / std::max(at(i, j), kLogFloor) * wb[grid.index(i, j)];
    }
  }

  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx;
    const int im = (i + nx - 1) % nx;
    const double w = admissible(s.w[i], "w");
    const double z = admissible(s.z[i], "z");
    const double gw = (s.w[ip] - s.w[im]) / (2.0 * grid.dx * len);
    const double gz = (s.z[ip] - s.z[im]) / (2.0 * grid.dx * len);
    d.surface_w += params.delta_gamma * gw * gw / std::max(w, kLogFloor) * ws[i];
    d.surface_z += params.delta_gamma_p * gz * gz / std::max(z, kLogFloor) * ws[i];
    const double uw = u[grid.index(i, 0)] * w;
    d.reaction += (uw - z) * std::log(std::max(uw, kLogFloor) / std::max(z, kLogFloor)) * ws[i];
  }
  d.total = d.bulk + d.surface_w + d.surface_z + d.reaction;
  return d;
}

EquilibriumState equilibrium(double M1, double M2, double area, double len) {
  if (!(M1 >= 0.0) || !(M2 >= 0.0)) throw DomainError("equilibrium needs non-negative masses");
  if (!(area > 0.0) || !(len > 0.0)) throw DomainError("equilibrium needs positive |Omega| and |Gamma|");

  // Eliminating w and z: |Omega| u^2 + (|Omega| + M2 - M1) u - M1 = 0.
  const double b = area + M2 - M1;
  const double disc = std::sqrt(b * b + 4.0 * area * M1);
  double u = 0.0;
  if (M1 > 0.0) u = b > 0.0 ? 2.0 * M1 / (b + disc) : (disc - b) / (2.0 * area);

  EquilibriumState eq;
  eq.u_inf = u;
  eq.w_inf = M2 / (len * (1.0 + u));
  eq.z_inf = u * eq.w_inf;
  return eq;
}

double entropy_of(const EquilibriumState& eq, const DomainMeasures& m) {
  return m.area_omega * xlogx_minus_x(eq.u_inf) +
         m.len_gamma * (xlogx_minus_x(eq.w_inf) + xlogx_minus_x(eq.z_inf));
}

double relative_entropy(const SimulationState& s, const Grid& grid, const MotionPreset& preset,
                        const EquilibriumState& eq) {
  require_stationary(preset, "relative entropy");
  validate(s, grid);
  const auto wb = bulk_weights(grid, preset, s.t);
  const auto ws = surface_weights(grid, preset, s.t);
  double e = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) e += relative_term(admissible(s.u[k], "u"), eq.u_inf) * wb[k];
  for (std::size_t k = 0; k < ws.size(); ++k) {
    e += relative_term(admissible(s.w[k], "w"), eq.w_inf) * ws[k];
    e += relative_term(admissible(s.z[k], "z"), eq.z_inf) * ws[k];
  }
  return e;
}

CkpGap ckp_gap(std::span<const double> f, std::span<const double> weights) {
  if (f.size() != weights.size()) throw ValidationError("ckp_gap: field and weights differ in size");
  double measure = 0.0, total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double v = admissible(f[k], "ckp field");
    measure += weights[k];
    total += v * weights[k];
  }
  if (!(measure > 0.0)) throw DomainError("ckp_gap: empty measure");
  const double mean = total / measure;
  if (!(mean > 0.0)) throw DomainError("ckp_gap: field mean is zero");

  CkpGap out;
  double l1 = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double v = std::max(f[k], 0.0);
    if (v > 0.0) out.lhs += v * std::log(v / mean) * weights[k];
    l1 += std::abs(v - mean) * weights[k];
  }
  out.rhs = l1 * l1 / (2.0 * measure * mean);
  return out;
}

XlogGap xlog_gap(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("xlog_gap needs positive arguments");
  return {x * std::log(x / y) - (x - y), (x - y) * (x - y) / (2.0 * x + 2.0 * y)};
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> e_rel,
                        const DecayFitOptions& options) {
  if (t.size() != e_rel.size()) throw FitError("time and value series differ in length");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double e = e_rel[k];
    if (std::isfinite(e) && std::isfinite(t[k]) && e >= options.floor && e > 0.0 &&
        e <= options.ceiling) {
      xs.push_back(t[k]);
      ys.push_back(std::log(e));
    }
  }
  if (xs.size() < 3) {
    throw FitError("need at least 3 usable points, have " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit window has a single distinct time");
  const double slope = sxy / sxx;

  DecayFit fit;
  fit.K = -slope;
  fit.intercept = my - slope * mx;
  fit.points = xs.size();
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double r = ys[k] - (fit.intercept + slope * xs[k]);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

DiagnosticsRow diagnose(const SimulationState& s, const Grid& grid, const MotionPreset& preset,
                        const SystemParameters& params, const MassPair& initial, double dt) {
  DiagnosticsRow row;
  row.t = s.t;
  const MassPair m = masses(s, grid, preset);
  row.M1 = m.M1;
  row.M2 = m.M2;
  row.dM1_rel = (m.M1 - initial.M1) / std::max(initial.M1, 1.0);
  row.dM2_rel = (m.M2 - initial.M2) / std::max(initial.M2, 1.0);
  row.dt = dt;

  auto extrema = [](const std::vector<double>& f, double& lo, double& hi) {
    const auto [a, b] = std::minmax_element(f.begin(), f.end());
    lo = *a;
    hi = *b;
  };
  extrema(s.u, row.u_min, row.u_max);
  extrema(s.w, row.w_min, row.w_max);
  extrema(s.z, row.z_min, row.z_max);

  const double lowest = std::min({row.u_min, row.w_min, row.z_min});
  if (preset.is_stationary() && lowest > -kNegativeSlack) {
    row.E = entropy(s, grid, preset);
    const DomainMeasures dm = domain_measures(grid, preset, s.t);
    const EquilibriumState eq = equilibrium(initial.M1, initial.M2, dm.area_omega, dm.len_gamma);
    row.E_rel = relative_entropy(s, grid, preset, eq);
    if (entropy_regime(params)) row.D = dissipation(s, grid, preset, params).total;
  }
  return row;
}

}  // namespace bsrd
