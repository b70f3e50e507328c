#include "bsrd/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsrd/error.hpp"

namespace bsrd {

Grid make_grid(int nx, int ny, double period, double height) {
  if (nx < 4) throw ValidationError("grid.Nx must be at least 4");
  if (ny < 4) throw ValidationError("grid.Ny must be at least 4");
  if (!(period > 0.0) || !std::isfinite(period)) throw ValidationError("strip period must be positive");
  if (!(height > 0.0) || !std::isfinite(height)) throw ValidationError("strip height must be positive");
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = period / nx;
  g.dy = height / ny;
  return g;
}

Grid make_grid(int nx, int ny, const MotionPreset& preset) {
  return make_grid(nx, ny, preset.period, preset.height);
}

SimulationState make_state(const Grid& grid, double t) {
  SimulationState s;
  s.t = t;
  s.u.assign(grid.bulk_size(), 0.0);
  s.w.assign(grid.surface_size(), 0.0);
  s.z.assign(grid.surface_size(), 0.0);
  return s;
}

void validate(const SimulationState& s, const Grid& grid) {
  if (s.u.size() != grid.bulk_size()) throw ValidationError("bulk field size does not match grid");
  if (s.w.size() != grid.surface_size()) throw ValidationError("w field size does not match grid");
  if (s.z.size() != grid.surface_size()) throw ValidationError("z field size does not match grid");
  auto check = [](const std::vector<double>& f, const char* name) {
    for (double v : f) {
      if (!std::isfinite(v)) throw ValidationError(std::string(name) + " contains non-finite values");
    }
  };
  check(s.u, "u");
  check(s.w, "w");
  check(s.z, "z");
}

std::vector<double> surface_laplacian(std::span<const double> f, const Grid& grid,
                                      std::span<const double> len) {
  const int n = grid.nx;
  if (f.size() != grid.surface_size() || len.size() != grid.surface_size()) {
    throw ValidationError("surface field size does not match grid");
  }
  std::vector<double> out(f.size());
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    const int im = (i + n - 1) % n;
    const double lr = 0.5 * (len[i] + len[ip]);
    const double ll = 0.5 * (len[im] + len[i]);
    out[i] = ((f[ip] - f[i]) / lr - (f[i] - f[im]) / ll) * inv_dx2 / len[i];
  }
  return out;
}

std::vector<double> surface_laplacian(std::span<const double> f, const Grid& grid, double len) {
  const std::vector<double> l(grid.surface_size(), len);
  return surface_laplacian(f, grid, l);
}

std::vector<double> surface_advection(std::span<const double> f, const Grid& grid,
                                      double velocity) {
  const int n = grid.nx;
  if (f.size() != grid.surface_size()) throw ValidationError("surface field size does not match grid");
  std::vector<double> out(f.size());
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    const int im = (i + n - 1) % n;
    out[i] = velocity * 0.5 * (f[ip] - f[im]) / grid.dx;
  }
  return out;
}

StripCoefficients strip_coefficients(const Grid& grid, const MotionPreset& preset, double t,
                                     const SystemParameters& params) {
  StripCoefficients c;
  const int rows = grid.ny + 1;
  c.jac.resize(rows);
  c.djac.resize(rows);
  c.axx.resize(rows);
  c.adv_x.resize(rows);
  c.ayy.resize(grid.ny);
  c.adv_y.resize(grid.ny);

  auto transport = [&](Vec2 xi, const GeometrySample& g) {
    const VelocitySample v = velocity_sample(preset, t, xi);
    return g.J * (g.M * v.J_Omega);
  };

  for (int j = 0; j < rows; ++j) {
    const Vec2 xi{0.0, grid.y(j)};
    const GeometrySample g = geometry_sample(preset, t, xi, params);
    if (g.A.xy != 0.0 || g.A.yx != 0.0) {
      throw GeometryError("off-diagonal diffusion tensor is not supported by the 5-point stencil");
    }
    c.jac[j] = g.J;
    c.djac[j] = g.dJdt;
    c.axx[j] = g.A.xx;
    c.adv_x[j] = transport(xi, g).x;
  }
  for (int j = 0; j < grid.ny; ++j) {
    const Vec2 xi{0.0, grid.y(j) + 0.5 * grid.dy};
    const GeometrySample g = geometry_sample(preset, t, xi, params);
    c.ayy[j] = g.A.yy;
    c.adv_y[j] = transport(xi, g).y;
  }

  const GeometrySample g0 = geometry_sample(preset, t, {0.0, 0.0}, params);
  const VelocitySample v0 = velocity_sample(preset, t, {0.0, 0.0});
  c.boundary_weight = g0.J * g0.omega;
  c.jump = v0.j;
  c.jn_membrane = dot(v0.J_Omega, v0.nu);
  c.surface_len = g0.surface_len;
  c.dlen_dt = g0.dlen_dt;
  // unit tangent of the membrane is DPhi e_x / |DPhi e_x| = (1, 0) for all presets
  c.surface_velocity = v0.J_Gamma.x;
  return c;
}

void bulk_rhs_into(const SimulationState& s, const Grid& grid, const StripCoefficients& c,
                   const SystemParameters& params, std::span<double> du) {
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double* u = s.u.data();
  const double inv_dx = 1.0 / grid.dx;
  const double inv_dy = 1.0 / grid.dy;

  // fx[i]: flux through x-face i+1/2 of the current row.
  // fy_dn / fy_up: fluxes through the y-faces below / above the current row,
  // with the Robin gain standing in for the face below row 0.
  thread_local std::vector<double> fx, fy_dn, fy_up;
  fx.resize(nx);
  fy_dn.resize(nx);
  fy_up.resize(nx);

  for (int i = 0; i < nx; ++i) {
    const double ui = u[i];
    fy_dn[i] = -c.boundary_weight *
               (robin_flux(ui, s.w[i], s.z[i], c.jump, params) - ui * c.jn_membrane);
  }

  for (int j = 0; j <= ny; ++j) {
    const double* row = u + static_cast<std::size_t>(j) * nx;
    const double axx = c.axx[j] * inv_dx;
    const double cx = 0.5 * c.adv_x[j];
    for (int i = 0; i + 1 < nx; ++i) {
      fx[i] = axx * (row[i + 1] - row[i]) - cx * (row[i] + row[i + 1]);
    }
    fx[nx - 1] = axx * (row[0] - row[nx - 1]) - cx * (row[nx - 1] + row[0]);

    if (j < ny) {
      const double* up = row + nx;
      const double ayy = c.ayy[j] * inv_dy;
      const double cy = 0.5 * c.adv_y[j];
      for (int i = 0; i < nx; ++i) fy_up[i] = ayy * (up[i] - row[i]) - cy * (row[i] + up[i]);
    } else {
      std::fill(fy_up.begin(), fy_up.end(), 0.0);
    }

    const double inv_vol = (j == 0 || j == ny) ? 2.0 * inv_dy : inv_dy;
    const double inv_jac = 1.0 / c.jac[j];
    const double djac = c.djac[j];
    double* out = du.data() + static_cast<std::size_t>(j) * nx;
    out[0] = ((fx[0] - fx[nx - 1]) * inv_dx + (fy_up[0] - fy_dn[0]) * inv_vol - row[0] * djac) *
             inv_jac;
    for (int i = 1; i < nx; ++i) {
      out[i] = ((fx[i] - fx[i - 1]) * inv_dx + (fy_up[i] - fy_dn[i]) * inv_vol - row[i] * djac) *
               inv_jac;
    }
    std::swap(fy_dn, fy_up);
  }
}

void surface_rhs_into(const SimulationState& s, const Grid& grid, const StripCoefficients& c,
                      const SystemParameters& params, std::span<double> dw,
                      std::span<double> dz) {
  const int n = grid.nx;
  const double len = c.surface_len;
  const double inv_dx = 1.0 / grid.dx;
  const double kw = params.delta_gamma / len * inv_dx;
  const double kz = params.delta_gamma_p / len * inv_dx;
  const double vel = 0.5 * c.surface_velocity;
  const double* w = s.w.data();
  const double* z = s.z.data();
  const double* trace = s.u.data();

  for (int i = 0; i < n; ++i) {
    const int ip = i + 1 == n ? 0 : i + 1;
    const int im = i == 0 ? n - 1 : i - 1;
    const double fw_r = kw * (w[ip] - w[i]) - vel * (w[i] + w[ip]);
    const double fw_l = kw * (w[i] - w[im]) - vel * (w[im] + w[i]);
    const double fz_r = kz * (z[ip] - z[i]) - vel * (z[i] + z[ip]);
    const double fz_l = kz * (z[i] - z[im]) - vel * (z[im] + z[i]);
    const double r = reaction(trace[i], w[i], z[i], params);
    dw[i] = ((fw_r - fw_l) * inv_dx + len * r - w[i] * c.dlen_dt) / len;
    dz[i] = ((fz_r - fz_l) * inv_dx - len * r - z[i] * c.dlen_dt) / len;
  }
}

std::vector<double> bulk_rhs(const SimulationState& state, const Grid& grid,
                             const MotionPreset& preset, const SystemParameters& params) {
  validate(state, grid);
  const StripCoefficients c = strip_coefficients(grid, preset, state.t, params);
  std::vector<double> du(grid.bulk_size());
  bulk_rhs_into(state, grid, c, params, du);
  return du;
}

SurfaceRates surface_rhs(const SimulationState& state, const Grid& grid,
                         const MotionPreset& preset, const SystemParameters& params) {
  validate(state, grid);
  const StripCoefficients c = strip_coefficients(grid, preset, state.t, params);
  SurfaceRates r;
  r.dw.resize(grid.surface_size());
  r.dz.resize(grid.surface_size());
  surface_rhs_into(state, grid, c, params, r.dw, r.dz);
  return r;
}

}  // namespace bsrd
