#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bsrd/discretization.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/geometry.hpp"
#include "bsrd/params.hpp"
#include "bsrd/timestepper.hpp"

/// Independent oracles for the production code paths. Nothing in here calls
/// back into the quantities it checks: geometry is rebuilt from finite
/// differences of the flow map, Laplacians come from a DFT, the well-mixed
/// reference trajectory uses its own RK4.
namespace bsrd::verify {

inline constexpr double kOrderLow = 1.7;
inline constexpr double kOrderHigh = 2.3;

enum class OperatorId { surface_laplacian, bulk_diffusion, surface_advection };

const char* to_string(OperatorId id);

using Field2 = std::function<double(double x, double y)>;

struct OrderStudy {
  std::vector<int> resolutions;
  std::vector<double> errors;  ///< max-norm error per resolution
  std::vector<double> orders;  ///< log2(e_h / e_{h/2})
  bool pass = false;
};

/// Applies the operator on [0, 2pi) x [0, 1] grids with N = resolutions[k]
/// cells per direction and compares to `exact_image` in the max norm (the
/// bulk operator on interior rows only). Needs >= 3 resolutions, each
/// doubling the previous.
OrderStudy operator_order(OperatorId id, const Field2& exact_field, const Field2& exact_image,
                          std::span<const int> resolutions);

/// The three standard studies: cos x under the surface Laplacian, the harmonic
/// cos x cosh y under the bulk operator, sin x under unit-speed advection.
OrderStudy standard_order_study(OperatorId id, std::span<const int> resolutions);

struct JacobiReport {
  double analytic_max_rel = 0.0;   ///< |dJ/dt - J div V_p| / max(1, |dJ/dt|)
  double fd_time_max_rel = 0.0;    ///< analytic dJ/dt against a centred difference of J
  double fd_geometry_max = 0.0;    ///< J, M, omega, len, V_p, div V_p against differences of Phi
  double compatibility_max = 0.0;  ///< |(V_p - V_Gamma) . nu| on the membrane
  bool pass = false;
};

inline constexpr double kJacobiAnalyticTol = 1e-10;
inline constexpr double kJacobiFdTol = 1e-6;
inline constexpr double kCompatibilityTol = 1e-14;

JacobiReport check_jacobi(const MotionPreset& preset, std::span<const double> t_samples,
                          std::span<const Vec2> xi_samples);

/// Spectral (DFT) second derivative of a periodic sample on [0, period).
std::vector<double> spectral_second_derivative(std::span<const double> f, double period);

/// Max over consecutive snapshot pairs and membrane nodes of
///   (v1 - v0)/dt - 1/2 sum_{k=0,1} [dGp v_k'' + (dG - dGp) w_k'']
/// with v = w + z and spectral derivatives. Stationary strip only.
double cross_diffusion_residual(std::span<const SimulationState> snapshots, const Grid& grid,
                                const SystemParameters& params);

struct CrossDiffusionStudy {
  std::vector<int> resolutions;
  std::vector<double> residuals;
  std::vector<double> scales;  ///< dx^2 + dt for each resolution
  double ratio = 0.0;          ///< residual(coarse) / residual(fine) for the last pair
  double constant = 0.0;       ///< 10 x the finest residual / scale
  bool within_bound = false;   ///< every residual <= constant * scale
};

/// Runs `config` at each resolution (Nx = Ny = N) to t_probe, takes one more
/// step and evaluates the residual on that pair.
CrossDiffusionStudy cross_diffusion_study(const RunConfig& config, std::span<const int> resolutions,
                                          double t_probe);

struct MaxPrincipleReport {
  double max_v = 0.0;    ///< max over snapshots of max(w + z)
  double bound = 0.0;    ///< max(w0 + z0)
  bool pass = false;
};

inline constexpr double kMaxPrincipleTol = 1e-8;

/// Requires delta_gamma == delta_gamma_p.
MaxPrincipleReport max_principle_check(std::span<const SimulationState> snapshots,
                                       const SystemParameters& params);

struct HomogeneousTrajectory {
  std::vector<double> t, u, w, z;
};

/// RK4 reference for spatially constant data on the stationary strip:
///   u' = (|Gamma|/|Omega|) r,  w' = r,  z' = -r.
/// Samples every `sample_every` (and at T).
HomogeneousTrajectory homogeneous_ode_oracle(const SystemParameters& params, double u0, double w0,
                                             double z0, double gamma_over_omega, double T,
                                             double sample_every, double dt_ref = 1e-5);

struct DependenceProbe {
  double diff0 = 0.0;   ///< L2 size of the initial perturbation
  double diffT = 0.0;   ///< L2 distance of the two runs at T
  double factor = 0.0;  ///< diffT / diff0, 0 when diff0 = 0
};

/// Runs `config` twice, the second time with the initial data perturbed by
/// epsilon times a fixed positive shape of unit L2 norm.
DependenceProbe continuous_dependence_probe(const RunConfig& config, double epsilon);

/// Same, with the unperturbed final state supplied (saves one run).
DependenceProbe continuous_dependence_probe(const RunConfig& config, double epsilon,
                                            const SimulationState& base_final);

/// Newton iteration on the three equilibrium equations, for cross-checking
/// the closed-form root.
EquilibriumState equilibrium_newton(double M1, double M2, double area_omega, double len_gamma);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> suite_names();

/// Runs the named suite ("all" for every suite) at light resolution.
/// Throws ValidationError for an unknown name.
std::vector<SuiteResult> run_suites(const std::string& name);

}  // namespace bsrd::verify
