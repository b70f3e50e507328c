#pragma once

#include <limits>
#include <numbers>
#include <string>

#include "bsrd/params.hpp"

namespace bsrd {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Row-major 2x2 matrix.
struct Mat2 {
  double xx = 0.0, xy = 0.0;
  double yx = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return xx * yy - xy * yx; }
  Mat2 transpose() const { return {xx, yx, xy, yy}; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(double s, const Mat2& a);
Vec2 operator*(const Mat2& a, Vec2 v);
Mat2 inverse(const Mat2& a);
double norm(Vec2 v);

enum class MotionKind { stationary, vertical_breathing, tangential_flow, combined };

const char* to_string(MotionKind kind);
MotionKind motion_kind_from_string(const std::string& name);

/// Analytic description of the moving strip.
///
/// The reference domain is the periodic strip [0, period) x [0, height]; its
/// bottom edge is the membrane and its top edge the fixed outer wall. The
/// membrane sits at physical height h(t) = amplitude * sin(frequency * t)
/// (h = 0 unless the kind is vertical_breathing) and the reference strip is
/// stretched affinely in y so that the wall stays at `height`. The membrane
/// material moves tangentially at v_tau; the bulk material velocity is zero.
struct MotionPreset {
  MotionKind kind = MotionKind::stationary;
  double amplitude = 0.0;
  double frequency = 0.0;
  double v_tau = 0.0;
  double height = 1.0;
  double period = 2.0 * std::numbers::pi;
  /// Upper end of the admissible time interval [0, T].
  double horizon = std::numeric_limits<double>::infinity();

  bool is_stationary() const { return kind == MotionKind::stationary; }
};

/// Throws ValidationError for inconsistent presets (amplitude >= height, ...).
void validate(const MotionPreset& preset);

/// Pullback quantities at one reference point.
struct GeometrySample {
  double J = 1.0;          ///< det(DPhi)
  Mat2 M;                  ///< DPhi^{-1}
  Mat2 A;                  ///< delta_omega * J * M * M^T
  Mat2 B;                  ///< A / J
  double omega = 1.0;      ///< |M^T nu0|, nu0 the outward normal of the membrane
  double dJdt = 0.0;
  double surface_len = 1.0;  ///< |dPhi/dx| along the membrane
  double dlen_dt = 0.0;
};

struct VelocitySample {
  Vec2 V_p;          ///< parametrisation velocity
  Vec2 V_Omega;      ///< bulk material velocity
  Vec2 V_Gamma;      ///< membrane material velocity
  double div_V_p = 0.0;            ///< physical divergence of V_p
  double div_V_Omega = 0.0;
  double divGamma_V_Gamma = 0.0;
  Vec2 J_Omega;      ///< V_Omega - V_p
  Vec2 J_Gamma;      ///< V_Gamma - V_p, evaluated on the membrane
  Vec2 nu;           ///< unit normal on the membrane pointing out of the bulk
  double j = 0.0;    ///< (V_Omega - V_Gamma) . nu on the membrane
};

/// Membrane height and its time derivative.
double membrane_height(const MotionPreset& preset, double t);
double membrane_speed(const MotionPreset& preset, double t);

/// Physical position of reference point xi at time t.
Vec2 flow_map(const MotionPreset& preset, double t, Vec2 xi);

/// Jacobian of flow_map with respect to xi (analytic).
Mat2 flow_jacobian(const MotionPreset& preset, double t, Vec2 xi);

GeometrySample geometry_sample(const MotionPreset& preset, double t, Vec2 xi,
                               const SystemParameters& params);

VelocitySample velocity_sample(const MotionPreset& preset, double t, Vec2 xi);

}  // namespace bsrd
