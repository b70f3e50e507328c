#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bsrd/geometry.hpp"
#include "bsrd/params.hpp"

namespace bsrd {

/// Node-centred tensor grid on the reference strip. Bulk nodes sit at
/// (i*dx, j*dy) for i in [0, nx) (periodic) and j in [0, ny]; row j = 0 is
/// the membrane, row j = ny the outer wall. Surface nodes coincide with row 0.
struct Grid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  std::size_t bulk_size() const { return static_cast<std::size_t>(nx) * (ny + 1); }
  std::size_t surface_size() const { return static_cast<std::size_t>(nx); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double x(int i) const { return i * dx; }
  double y(int j) const { return j * dy; }
  /// Trapezoid weight in y (1/2 on the two boundary rows).
  double row_weight(int j) const { return (j == 0 || j == ny) ? 0.5 : 1.0; }
};

/// Throws ValidationError unless nx, ny >= 4 and the strip is non-degenerate.
Grid make_grid(int nx, int ny, double period, double height);
Grid make_grid(int nx, int ny, const MotionPreset& preset);

struct SimulationState {
  double t = 0.0;
  std::vector<double> u;  ///< bulk, size nx*(ny+1), row-major in y
  std::vector<double> w;  ///< free receptors, size nx
  std::vector<double> z;  ///< complexes, size nx
};

SimulationState make_state(const Grid& grid, double t = 0.0);

/// Throws ValidationError if sizes disagree with the grid or any entry is not finite.
void validate(const SimulationState& state, const Grid& grid);

/// z / delta_kp - u w / delta_k
inline double reaction(double u, double w, double z, const SystemParameters& p) {
  return z / p.delta_kp - u * w / p.delta_k;
}

/// Diffusive normal flux delta_omega grad u . nu demanded by the Robin condition.
inline double robin_flux(double u_trace, double w, double z, double jump,
                         const SystemParameters& p) {
  return reaction(u_trace, w, z, p) + jump * u_trace;
}

/// (1/l) d/dx ((1/l) df/dx) on the periodic line, conservative central form.
/// `len` holds the line-element factor at the nodes (faces use the average).
std::vector<double> surface_laplacian(std::span<const double> f, const Grid& grid,
                                      std::span<const double> len);
std::vector<double> surface_laplacian(std::span<const double> f, const Grid& grid,
                                      double len = 1.0);

/// d/dx (v f) with centred face values (v constant along the line).
std::vector<double> surface_advection(std::span<const double> f, const Grid& grid,
                                      double velocity);

/// Per-row pullback coefficients at one time. Motion presets are uniform in x,
/// so one sample per node row and per y-face is enough.
struct StripCoefficients {
  std::vector<double> jac;       ///< J at node rows
  std::vector<double> djac;      ///< dJ/dt at node rows
  std::vector<double> axx;       ///< A_xx at node rows (x-faces)
  std::vector<double> adv_x;     ///< x-component of J * M * J_Omega at node rows
  std::vector<double> ayy;       ///< A_yy at y-faces j+1/2, j in [0, ny)
  std::vector<double> adv_y;     ///< y-component of J * M * J_Omega at y-faces
  double boundary_weight = 1.0;  ///< J * omega on the membrane
  double jump = 0.0;             ///< (V_Omega - V_Gamma) . nu
  double jn_membrane = 0.0;      ///< J_Omega . nu on the membrane
  double surface_len = 1.0;
  double dlen_dt = 0.0;
  double surface_velocity = 0.0; ///< tangential component of J_Gamma
};

StripCoefficients strip_coefficients(const Grid& grid, const MotionPreset& preset, double t,
                                     const SystemParameters& params);

/// du/dt on the reference grid: conservative flux divergence of the pulled
/// back bulk equation, Robin exchange on row 0, no flux on row ny.
std::vector<double> bulk_rhs(const SimulationState& state, const Grid& grid,
                             const MotionPreset& preset, const SystemParameters& params);

struct SurfaceRates {
  std::vector<double> dw;
  std::vector<double> dz;
};

SurfaceRates surface_rhs(const SimulationState& state, const Grid& grid,
                         const MotionPreset& preset, const SystemParameters& params);

/// Allocation-free kernels used by the time stepper.
void bulk_rhs_into(const SimulationState& state, const Grid& grid, const StripCoefficients& c,
                   const SystemParameters& params, std::span<double> du);
void surface_rhs_into(const SimulationState& state, const Grid& grid,
                      const StripCoefficients& c, const SystemParameters& params,
                      std::span<double> dw, std::span<double> dz);

}  // namespace bsrd
