#include "bsrd/params.hpp"

#include <cmath>
#include <string>

#include "bsrd/error.hpp"

namespace bsrd {

namespace {

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw ValidationError(std::string(name) + " must be positive");
  }
}

}  // namespace

void validate(const SystemParameters& p) {
  require_positive(p.delta_omega, "delta_omega");
  require_positive(p.delta_gamma, "delta_gamma");
  require_positive(p.delta_gamma_p, "delta_gamma_p");
  require_positive(p.delta_k, "delta_k");
  require_positive(p.delta_kp, "delta_kp");
}

void validate(const DimensionalParameters& d) {
  require_positive(d.D_L, "D_L");
  require_positive(d.D_Gamma, "D_Gamma");
  require_positive(d.D_GammaP, "D_GammaP");
  require_positive(d.k_on, "k_on");
  require_positive(d.k_off, "k_off");
  require_positive(d.L, "L");
  require_positive(d.S, "S");
  require_positive(d.U, "U");
  require_positive(d.W, "W");
  require_positive(d.Z, "Z");
}

NondimensionalResult nondimensionalize(const DimensionalParameters& d) {
  validate(d);
  const double L2 = d.L * d.L;
  NondimensionalResult out;
  out.params.delta_omega = d.S * d.D_L / L2;
  out.params.delta_gamma = d.S * d.D_Gamma / L2;
  out.params.delta_gamma_p = d.S * d.D_GammaP / L2;
  out.params.delta_k = 1.0 / (d.U * d.S * d.k_on);
  out.params.delta_kp = 1.0 / (d.S * d.k_off);
  out.gamma = d.L * d.U / d.W;
  out.gamma_p = d.L * d.U / d.Z;
  return out;
}

DimensionalParameters redimensionalize(const SystemParameters& p,
                                       const DimensionalParameters& scales) {
  validate(p);
  DimensionalParameters d = scales;
  const double L2 = d.L * d.L;
  d.D_L = p.delta_omega * L2 / d.S;
  d.D_Gamma = p.delta_gamma * L2 / d.S;
  d.D_GammaP = p.delta_gamma_p * L2 / d.S;
  d.k_on = 1.0 / (p.delta_k * d.U * d.S);
  d.k_off = 1.0 / (p.delta_kp * d.S);
  return d;
}

}  // namespace bsrd
