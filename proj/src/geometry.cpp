#include "bsrd/geometry.hpp"

#include <cmath>

#include "bsrd/error.hpp"

namespace bsrd {

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
          a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}

Mat2 operator*(double s, const Mat2& a) { return {s * a.xx, s * a.xy, s * a.yx, s * a.yy}; }

Vec2 operator*(const Mat2& a, Vec2 v) {
  return {a.xx * v.x + a.xy * v.y, a.yx * v.x + a.yy * v.y};
}

Mat2 inverse(const Mat2& a) {
  const double d = a.det();
  if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
    throw GeometryError("singular flow-map Jacobian");
  }
  return {a.yy / d, -a.xy / d, -a.yx / d, a.xx / d};
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

const char* to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::stationary: return "stationary";
    case MotionKind::vertical_breathing: return "vertical_breathing";
    case MotionKind::tangential_flow: return "tangential_flow";
    case MotionKind::combined: return "combined";
  }
  return "unknown";
}

MotionKind motion_kind_from_string(const std::string& name) {
  if (name == "stationary") return MotionKind::stationary;
  if (name == "vertical_breathing") return MotionKind::vertical_breathing;
  if (name == "tangential_flow") return MotionKind::tangential_flow;
  if (name == "combined") return MotionKind::combined;
  throw ValidationError("motion.kind: unknown preset '" + name +
                        "' (expected stationary, vertical_breathing, tangential_flow)");
}

void validate(const MotionPreset& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.height) || p.height <= 0.0) throw ValidationError("motion.H must be positive");
  if (!finite(p.period) || p.period <= 0.0) throw ValidationError("motion.Px must be positive");
  if (!finite(p.amplitude) || p.amplitude < 0.0) {
    throw ValidationError("motion.amplitude must be non-negative");
  }
  if (!finite(p.frequency)) throw ValidationError("motion.frequency must be finite");
  if (!finite(p.v_tau)) throw ValidationError("motion.v_tau must be finite");
  if (!(p.horizon >= 0.0)) throw ValidationError("motion horizon must be non-negative");
  if (p.amplitude >= p.height) {
    throw ValidationError("motion.amplitude must be smaller than motion.H (a < H)");
  }
  switch (p.kind) {
    case MotionKind::stationary:
      if (p.amplitude != 0.0 || p.v_tau != 0.0) {
        throw ValidationError("stationary preset requires amplitude = 0 and v_tau = 0");
      }
      break;
    case MotionKind::tangential_flow:
      if (p.amplitude != 0.0) {
        throw ValidationError("tangential_flow preset requires amplitude = 0");
      }
      break;
    case MotionKind::vertical_breathing:
      break;
    case MotionKind::combined:
      // x-dependent membrane height needs the full 9-point stencil.
      throw ValidationError("motion.kind 'combined' is reserved and not implemented");
  }
}

double membrane_height(const MotionPreset& p, double t) {
  if (p.kind != MotionKind::vertical_breathing) return 0.0;
  return p.amplitude * std::sin(p.frequency * t);
}

double membrane_speed(const MotionPreset& p, double t) {
  if (p.kind != MotionKind::vertical_breathing) return 0.0;
  return p.amplitude * p.frequency * std::cos(p.frequency * t);
}

namespace {

constexpr double kReferenceSlack = 1e-12;

void check_domain(const MotionPreset& p, double t, Vec2 xi) {
  if (!(t >= 0.0) || t > p.horizon * (1.0 + kReferenceSlack) + kReferenceSlack) {
    throw DomainError("time " + std::to_string(t) + " outside [0, T]");
  }
  const double sx = kReferenceSlack * p.period;
  const double sy = kReferenceSlack * p.height;
  if (!(xi.x >= -sx && xi.x <= p.period + sx && xi.y >= -sy && xi.y <= p.height + sy)) {
    throw DomainError("reference point outside the strip [0,Px) x [0,H]");
  }
}

/// Time derivative of the flow-map Jacobian.
Mat2 flow_jacobian_rate(const MotionPreset& p, double t) {
  return {0.0, 0.0, 0.0, -membrane_speed(p, t) / p.height};
}

Vec2 parametrisation_velocity(const MotionPreset& p, double t, Vec2 xi) {
  return {0.0, membrane_speed(p, t) * (1.0 - xi.y / p.height)};
}

}  // namespace

Vec2 flow_map(const MotionPreset& p, double t, Vec2 xi) {
  check_domain(p, t, xi);
  const double h = membrane_height(p, t);
  return {xi.x, h + xi.y * (p.height - h) / p.height};
}

Mat2 flow_jacobian(const MotionPreset& p, double t, Vec2 xi) {
  check_domain(p, t, xi);
  const double h = membrane_height(p, t);
  return {1.0, 0.0, 0.0, (p.height - h) / p.height};
}

GeometrySample geometry_sample(const MotionPreset& p, double t, Vec2 xi,
                               const SystemParameters& params) {
  const Mat2 F = flow_jacobian(p, t, xi);
  const Mat2 dF = flow_jacobian_rate(p, t);

  GeometrySample g;
  g.J = F.det();
  if (!(g.J > 0.0)) throw GeometryError("flow map is not orientation preserving");
  g.M = inverse(F);
  g.A = (params.delta_omega * g.J) * (g.M * g.M.transpose());
  g.B = (1.0 / g.J) * g.A;
  g.omega = norm(g.M.transpose() * Vec2{0.0, -1.0});
  // d/dt det F = tr(adj(F) dF)
  g.dJdt = F.yy * dF.xx - F.xy * dF.yx - F.yx * dF.xy + F.xx * dF.yy;
  const Vec2 tangent = F * Vec2{1.0, 0.0};
  const Vec2 dtangent = dF * Vec2{1.0, 0.0};
  g.surface_len = norm(tangent);
  g.dlen_dt = dot(tangent, dtangent) / g.surface_len;
  return g;
}

VelocitySample velocity_sample(const MotionPreset& p, double t, Vec2 xi) {
  check_domain(p, t, xi);
  const double hdot = membrane_speed(p, t);

  VelocitySample v;
  v.V_p = parametrisation_velocity(p, t, xi);
  v.V_Omega = {0.0, 0.0};
  v.V_Gamma = {p.v_tau, hdot};
  // div V_p = tr(grad_xi V_p * M) with grad_xi V_p = dF/dt
  const Mat2 M = inverse(flow_jacobian(p, t, xi));
  const Mat2 G = flow_jacobian_rate(p, t) * M;
  v.div_V_p = G.xx + G.yy;
  v.div_V_Omega = 0.0;
  v.divGamma_V_Gamma = 0.0;
  v.J_Omega = v.V_Omega - v.V_p;
  v.J_Gamma = v.V_Gamma - parametrisation_velocity(p, t, {xi.x, 0.0});
  v.nu = {0.0, -1.0};
  v.j = dot(v.V_Omega - v.V_Gamma, v.nu);
  return v;
}

}  // namespace bsrd
