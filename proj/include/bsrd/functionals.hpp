#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bsrd/discretization.hpp"
#include "bsrd/geometry.hpp"
#include "bsrd/params.hpp"

namespace bsrd {

/// Conserved totals: M1 = int u + int z (ligand, free or bound),
/// M2 = int w + int z (receptors, free or bound).
struct MassPair {
  double M1 = 0.0;
  double M2 = 0.0;
};

struct DomainMeasures {
  double area_omega = 0.0;
  double len_gamma = 0.0;
};

struct EquilibriumState {
  double u_inf = 0.0;
  double w_inf = 0.0;
  double z_inf = 0.0;
};

struct DissipationTerms {
  double bulk = 0.0;       ///< int |grad u|^2 / u
  double surface_w = 0.0;  ///< delta_gamma int |grad w|^2 / w
  double surface_z = 0.0;  ///< delta_gamma_p int |grad z|^2 / z
  double reaction = 0.0;   ///< int (uw - z) log(uw / z)
  double total = 0.0;
};

/// One output-time record. E, D and E_rel only exist on the stationary strip
/// (D additionally needs delta_omega = delta_k = delta_kp = 1).
struct DiagnosticsRow {
  double t = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double dM1_rel = 0.0;
  double dM2_rel = 0.0;
  std::optional<double> E;
  std::optional<double> D;
  std::optional<double> E_rel;
  double u_min = 0.0, u_max = 0.0;
  double w_min = 0.0, w_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  double dt = 0.0;  ///< stability-limited step in force (0 at t = 0)
};

/// Floor applied to arguments of logarithms (and the Fisher-information
/// denominators) inside the dissipation.
inline constexpr double kLogFloor = 1e-12;
/// Negative values above this are treated as round-off and clamped to zero.
inline constexpr double kNegativeSlack = 1e-10;

/// Quadrature weights: J * dx * dy (trapezoid in y) on the bulk nodes and the
/// membrane line element times dx on the surface nodes.
std::vector<double> bulk_weights(const Grid& grid, const MotionPreset& preset, double t);
std::vector<double> surface_weights(const Grid& grid, const MotionPreset& preset, double t);

DomainMeasures domain_measures(const Grid& grid, const MotionPreset& preset, double t);

MassPair masses(const SimulationState& state, const Grid& grid, const MotionPreset& preset);

/// int u(log u - 1) + int w(log w - 1) + int z(log z - 1), with 0 log 0 = 0.
double entropy(const SimulationState& state, const Grid& grid, const MotionPreset& preset);

DissipationTerms dissipation(const SimulationState& state, const Grid& grid,
                             const MotionPreset& preset, const SystemParameters& params);

/// True when delta_omega = delta_k = delta_kp = 1, where E decreases at rate D.
bool entropy_regime(const SystemParameters& params);

/// Unique non-negative solution of
///   |Omega| u + |Gamma| z = M1,  |Gamma| (w + z) = M2,  u w = z.
EquilibriumState equilibrium(double M1, double M2, double area_omega, double len_gamma);

double entropy_of(const EquilibriumState& eq, const DomainMeasures& measures);

/// E(state) - E(eq) evaluated as a sum of non-negative terms
/// f log(f / f_inf) - f + f_inf, which agrees with the plain difference when the
/// state carries the same masses as the equilibrium.
double relative_entropy(const SimulationState& state, const Grid& grid,
                        const MotionPreset& preset, const EquilibriumState& eq);

struct CkpGap {
  double lhs = 0.0;  ///< int f log(f / mean)
  double rhs = 0.0;  ///< ||f - mean||_1^2 / (2 |M| mean)
};

/// Both sides of the Csiszar-Kullback-Pinsker inequality for a non-negative
/// field under the quadrature `weights`.
CkpGap ckp_gap(std::span<const double> f, std::span<const double> weights);

struct XlogGap {
  double gap = 0.0;    ///< x log(x/y) - (x - y)
  double bound = 0.0;  ///< (x - y)^2 / (2x + 2y)
};

XlogGap xlog_gap(double x, double y);

struct DecayFitOptions {
  double floor = 1e-12;                                       ///< drop values below
  double ceiling = std::numeric_limits<double>::infinity();  ///< drop values above
};

struct DecayFit {
  double K = 0.0;  ///< decay rate, minus the slope of log E_rel against t
  double r_squared = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> e_rel,
                        const DecayFitOptions& options = {});

DiagnosticsRow diagnose(const SimulationState& state, const Grid& grid,
                        const MotionPreset& preset, const SystemParameters& params,
                        const MassPair& initial, double dt);

}  // namespace bsrd
