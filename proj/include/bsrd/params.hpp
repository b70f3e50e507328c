#pragma once

namespace bsrd {

/// Dimensionless constants of the ligand/receptor/complex system.
struct SystemParameters {
  double delta_omega = 1.0;    ///< bulk (ligand) diffusivity
  double delta_gamma = 1.0;    ///< free receptor surface diffusivity
  double delta_gamma_p = 1.0;  ///< complex surface diffusivity
  double delta_k = 1.0;        ///< binding time constant
  double delta_kp = 1.0;       ///< dissociation time constant
};

/// Physical constants and the scales used to remove units.
struct DimensionalParameters {
  double D_L = 1.0;
  double D_Gamma = 1.0;
  double D_GammaP = 1.0;
  double k_on = 1.0;   ///< 1/(concentration * time)
  double k_off = 1.0;  ///< 1/time
  double L = 1.0;      ///< length scale
  double S = 1.0;      ///< time scale
  double U = 1.0;      ///< ligand concentration scale
  double W = 1.0;      ///< receptor concentration scale
  double Z = 1.0;      ///< complex concentration scale
};

struct NondimensionalResult {
  SystemParameters params;
  double gamma = 1.0;    ///< L*U/W, w = w_bar / gamma
  double gamma_p = 1.0;  ///< L*U/Z, z = z_bar / gamma_p
};

/// Throws ValidationError naming the first non-positive (or non-finite) field.
void validate(const SystemParameters& params);
void validate(const DimensionalParameters& dim);

NondimensionalResult nondimensionalize(const DimensionalParameters& dim);

/// Inverse of nondimensionalize for the physical constants. The scale fields
/// (L, S, U, W, Z) of `scales` are kept; D_L, D_Gamma, D_GammaP, k_on and
/// k_off are recomputed from `params`.
DimensionalParameters redimensionalize(const SystemParameters& params,
                                       const DimensionalParameters& scales);

}  // namespace bsrd
