#include "bsrd/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bsrd/error.hpp"

namespace bsrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double periodic_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

double profile_value(const FieldProfile& p, const MotionPreset& preset, double x, double y,
                     bool surface) {
  switch (p.kind) {
    case ProfileKind::constant:
      return p.value;
    case ProfileKind::gaussian: {
      const double dx = periodic_distance(x, p.center.x, preset.period);
      const double dy = surface ? 0.0 : y - p.center.y;
      return p.value + p.height * std::exp(-(dx * dx + dy * dy) / (2.0 * p.width * p.width));
    }
    case ProfileKind::cosine:
      return p.value *
             (1.0 + p.amplitude * std::cos(2.0 * std::numbers::pi * p.mode * x / preset.period));
    case ProfileKind::table:
      break;
  }
  return 0.0;
}

void fill_field(std::vector<double>& field, const FieldProfile& p, const Grid& grid,
                const MotionPreset& preset, bool surface, const std::vector<double>& weights,
                const char* name) {
  if (p.kind == ProfileKind::table) {
    if (p.table.size() != field.size()) {
      throw ValidationError(std::string("initial.") + name + ".values must have " +
                            std::to_string(field.size()) + " entries");
    }
    field = p.table;
  } else {
    const int rows = surface ? 1 : grid.ny + 1;
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        field[grid.index(i, j)] = profile_value(p, preset, grid.x(i), grid.y(j), surface);
      }
    }
  }
  if (p.mass) {
    double total = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) total += field[k] * weights[k];
    if (*p.mass != 0.0 && !(std::abs(total) > 0.0)) {
      throw ValidationError(std::string("initial.") + name +
                            ".mass: cannot rescale a profile with zero integral");
    }
    const double scale = total == 0.0 ? 0.0 : *p.mass / total;
    for (double& v : field) v *= scale;
  }
}

void validate_profile(const FieldProfile& p, const char* name) {
  const std::string prefix = std::string("initial.") + name;
  if (p.kind == ProfileKind::gaussian && !(p.width > 0.0)) {
    throw ValidationError(prefix + ".width must be positive");
  }
  if (p.mass && !(*p.mass >= 0.0)) throw ValidationError(prefix + ".mass must be non-negative");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.value) || !finite(p.height) || !finite(p.amplitude) || !finite(p.center.x) ||
      !finite(p.center.y)) {
    throw ValidationError(prefix + " has non-finite parameters");
  }
}

void check_finite(const std::vector<double>& f, const char* name, double t) {
  for (double v : f) {
    if (!std::isfinite(v)) {
      throw BlowUpError(std::string("non-finite ") + name + " at t = " + std::to_string(t));
    }
  }
}

}  // namespace

void validate(const RunConfig& c) {
  validate(c.params);
  validate(c.preset);
  const Grid expect = make_grid(c.grid.nx, c.grid.ny, c.preset);
  if (std::abs(expect.dx - c.grid.dx) > 1e-14 * expect.dx ||
      std::abs(expect.dy - c.grid.dy) > 1e-14 * expect.dy) {
    throw ValidationError("grid spacing does not match the strip dimensions");
  }
  if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final)) {
    throw ValidationError("run.T_final must be non-negative");
  }
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) {
    throw ValidationError("run.cfl_safety must lie in (0, 1]");
  }
  if (!(c.output_every > 0.0) || !std::isfinite(c.output_every)) {
    throw ValidationError("run.output_every must be positive");
  }
  validate_profile(c.initial.u, "u");
  validate_profile(c.initial.w, "w");
  validate_profile(c.initial.z, "z");
}

SimulationState initial_state(const RunConfig& c) {
  SimulationState s = make_state(c.grid, 0.0);
  const auto wb = bulk_weights(c.grid, c.preset, 0.0);
  const auto ws = surface_weights(c.grid, c.preset, 0.0);
  fill_field(s.u, c.initial.u, c.grid, c.preset, false, wb, "u");
  fill_field(s.w, c.initial.w, c.grid, c.preset, true, ws, "w");
  fill_field(s.z, c.initial.z, c.grid, c.preset, true, ws, "z");
  validate(s, c.grid);
  return s;
}

double cfl_dt(const Grid& grid, const MotionPreset& preset, const SystemParameters& params,
              double t, double safety) {
  const StripCoefficients c = strip_coefficients(grid, preset, t, params);
  double diff = std::max(params.delta_gamma, params.delta_gamma_p) / (c.surface_len * c.surface_len);
  double speed = std::abs(c.surface_velocity) / c.surface_len;
  for (int j = 0; j <= grid.ny; ++j) {
    diff = std::max(diff, c.axx[j] / c.jac[j]);
    speed = std::max(speed, std::abs(c.adv_x[j]) / c.jac[j]);
  }
  for (int j = 0; j < grid.ny; ++j) {
    // J at the face is the mean of the neighbouring rows for the affine presets
    const double jac = 0.5 * (c.jac[j] + c.jac[j + 1]);
    diff = std::max(diff, c.ayy[j] / jac);
    speed = std::max(speed, std::abs(c.adv_y[j]) / jac);
  }
  const double h = std::min(grid.dx, grid.dy);
  const double dt_diff = diff > 0.0 ? 0.25 * h * h / diff : kInf;
  const double dt_adv = speed > 0.0 ? h / speed : kInf;
  const double dt = safety * std::min(dt_diff, dt_adv);
  return std::max(dt, 1e-12);
}

Stepper::Stepper(const Grid& grid, const MotionPreset& preset, const SystemParameters& params)
    : grid_(grid),
      preset_(preset),
      params_(params),
      time_dependent_(preset.kind == MotionKind::vertical_breathing),
      stage_(make_state(grid)),
      k1u_(grid.bulk_size()),
      k1w_(grid.surface_size()),
      k1z_(grid.surface_size()),
      k2u_(grid.bulk_size()),
      k2w_(grid.surface_size()),
      k2z_(grid.surface_size()) {
  if (!time_dependent_) cached_ = strip_coefficients(grid_, preset_, 0.0, params_);
}

const StripCoefficients& Stepper::coefficients(double t) {
  if (time_dependent_) cached_ = strip_coefficients(grid_, preset_, t, params_);
  return cached_;
}

void Stepper::advance(SimulationState& s, double dt) {
  const double t0 = s.t;
  const StripCoefficients& c1 = coefficients(t0);
  bulk_rhs_into(s, grid_, c1, params_, k1u_);
  surface_rhs_into(s, grid_, c1, params_, k1w_, k1z_);

  stage_.t = t0 + dt;
  for (std::size_t k = 0; k < s.u.size(); ++k) stage_.u[k] = s.u[k] + dt * k1u_[k];
  for (std::size_t k = 0; k < s.w.size(); ++k) {
    stage_.w[k] = s.w[k] + dt * k1w_[k];
    stage_.z[k] = s.z[k] + dt * k1z_[k];
  }

  const StripCoefficients& c2 = coefficients(stage_.t);
  bulk_rhs_into(stage_, grid_, c2, params_, k2u_);
  surface_rhs_into(stage_, grid_, c2, params_, k2w_, k2z_);

  const double half = 0.5 * dt;
  for (std::size_t k = 0; k < s.u.size(); ++k) s.u[k] += half * (k1u_[k] + k2u_[k]);
  for (std::size_t k = 0; k < s.w.size(); ++k) {
    s.w[k] += half * (k1w_[k] + k2w_[k]);
    s.z[k] += half * (k1z_[k] + k2z_[k]);
  }
  s.t = t0 + dt;

  check_finite(s.u, "u", s.t);
  check_finite(s.w, "w", s.t);
  check_finite(s.z, "z", s.t);
}

SimulationState step(const SimulationState& state, double dt, const Grid& grid,
                     const MotionPreset& preset, const SystemParameters& params) {
  validate(state, grid);
  if (!(dt > 0.0)) throw ValidationError("step size must be positive");
  const double limit = cfl_dt(grid, preset, params, state.t, 1.0);
  if (dt > limit * (1.0 + 1e-12)) {
    throw ValidationError("step size " + std::to_string(dt) + " exceeds the stability limit " +
                          std::to_string(limit));
  }
  SimulationState next = state;
  Stepper stepper(grid, preset, params);
  stepper.advance(next, dt);
  return next;
}

Trajectory run(const RunConfig& config, const OutputObserver& observer) {
  RunConfig c = config;
  c.preset.horizon = c.t_final;
  validate(c);

  Trajectory traj;
  SimulationState state = initial_state(c);
  const MassPair initial = masses(state, c.grid, c.preset);

  auto emit = [&](double dt) {
    DiagnosticsRow row = diagnose(state, c.grid, c.preset, c.params, initial, dt);
    if (observer) observer(state, row);
    if (c.keep_snapshots) traj.snapshots.push_back(state);
    traj.rows.push_back(std::move(row));
  };

  emit(0.0);
  Stepper stepper(c.grid, c.preset, c.params);
  const bool steady_cfl = c.preset.kind != MotionKind::vertical_breathing;
  double cached_cfl = steady_cfl ? cfl_dt(c.grid, c.preset, c.params, 0.0, c.cfl_safety) : 0.0;
  const double eps = 1e-12 * std::max(1.0, c.t_final);

  double last_dt = 0.0;
  for (long k = 1; state.t < c.t_final - eps; ++k) {
    const double target = std::min(static_cast<double>(k) * c.output_every, c.t_final);
    while (state.t < target - eps) {
      const double limit =
          steady_cfl ? cached_cfl : cfl_dt(c.grid, c.preset, c.params, state.t, c.cfl_safety);
      const double remaining = target - state.t;
      const double dt = std::min(limit, remaining);
      stepper.advance(state, dt);
      if (dt == remaining) state.t = target;
      last_dt = limit;
    }
    state.t = target;
    emit(last_dt);
  }
  return traj;
}

}  // namespace bsrd
