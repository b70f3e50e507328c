#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bsrd/discretization.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/geometry.hpp"
#include "bsrd/params.hpp"

namespace bsrd {

enum class ProfileKind { constant, gaussian, cosine, table };

/// Initial profile of one field on the reference strip.
///   constant: value
///   gaussian: value + height * exp(-d^2 / (2 width^2)), d the periodic distance
///             to `center` (only center.x is used on the membrane)
///   cosine:   value * (1 + amplitude * cos(2 pi mode x / Px))
///   table:    explicit nodal values (nx for w/z, nx*(ny+1) for u, row-major)
/// When `mass` is set the profile is rescaled so that its integral at t = 0
/// equals it.
struct FieldProfile {
  ProfileKind kind = ProfileKind::constant;
  double value = 0.0;
  double height = 0.0;
  Vec2 center;
  double width = 1.0;
  double amplitude = 0.0;
  int mode = 1;
  std::vector<double> table;
  std::optional<double> mass;
};

struct InitialData {
  FieldProfile u;
  FieldProfile w;
  FieldProfile z;
};

struct RunConfig {
  Grid grid;
  MotionPreset preset;
  SystemParameters params;
  InitialData initial;
  double t_final = 1.0;
  double cfl_safety = 0.4;
  double output_every = 0.05;
  bool keep_snapshots = false;
};

void validate(const RunConfig& config);

SimulationState initial_state(const RunConfig& config);

/// Explicit stability limit: safety * min(0.25 h^2 / D_max, h / |v|_max) with
/// h = min(dx, dy), D_max the largest reference-frame diffusivity (bulk B
/// entries and surface delta / len^2), floored at 1e-12. Infinite when
/// nothing diffuses or moves.
double cfl_dt(const Grid& grid, const MotionPreset& preset, const SystemParameters& params,
              double t, double safety);

/// Heun (explicit trapezoidal RK2) on (u, w, z) with geometry sampled at both
/// stage times. Reuses its work arrays between calls.
class Stepper {
public:
  Stepper(const Grid& grid, const MotionPreset& preset, const SystemParameters& params);

  /// Advances `state` by dt in place. Throws BlowUpError on non-finite output.
  void advance(SimulationState& state, double dt);

private:
  const StripCoefficients& coefficients(double t);

  Grid grid_;
  MotionPreset preset_;
  SystemParameters params_;
  bool time_dependent_;
  StripCoefficients cached_;
  SimulationState stage_;
  std::vector<double> k1u_, k1w_, k1z_, k2u_, k2w_, k2z_;
};

/// One Heun step; requires dt <= cfl_dt(..., safety = 1).
SimulationState step(const SimulationState& state, double dt, const Grid& grid,
                     const MotionPreset& preset, const SystemParameters& params);

struct Trajectory {
  std::vector<SimulationState> snapshots;  ///< filled when keep_snapshots is set
  std::vector<DiagnosticsRow> rows;
};

using OutputObserver = std::function<void(const SimulationState&, const DiagnosticsRow&)>;

/// Integrates to t_final, emitting a diagnostics row at t = 0 and at every
/// multiple of output_every (plus t_final). The observer sees each output as
/// it is produced, so partial results survive a blow-up.
Trajectory run(const RunConfig& config, const OutputObserver& observer = {});

}  // namespace bsrd
