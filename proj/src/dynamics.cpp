#include "tiltsim/dynamics.hpp"

namespace tiltsim {

void VehicleParams::validate() const {
  if (!(k_f1 > 0.0) || !(k_f2 > 0.0)) {
    throw std::invalid_argument("thrust coefficients must be positive");
  }
  if (!(i_t > 0.0) || !(i_b > 0.0)) {
    throw std::invalid_argument("inertias must be positive");
  }
  if (std::fabs(1.0 - inertia_ratio()) < 1e-9) {
    throw std::invalid_argument(
        "i_t/i_b must differ from 1 (tilt channel would vanish)");
  }
  if (!(theta > 0.0) || !(theta < M_PI / 2.0)) {
    throw std::invalid_argument("theta must lie in (0, pi/2)");
  }
  if (!(mass > 0.0)) {
    throw std::invalid_argument("mass must be positive");
  }
}

double thrust(double omega, double k_f) {
  if (omega < 0.0) throw NegativeOmega(omega);
  return k_f * omega * omega;
}

Mat2 j_theta(const VehicleParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {p.k_f1 * c, p.k_f2 * c, p.k_f1 * s, -p.k_f2 * s};
}

Vec2 body_accel(const SimState& s, const VehicleParams& p) {
  const double phi = psi_from_alpha(s.alpha, p) + s.alpha;
  const Vec2 w_sq{s.omega1 * s.omega1, s.omega2 * s.omega2};
  return rotation(phi) * (j_theta(p) * w_sq) * (1.0 / p.mass);
}

AccelDecomposition jerk_decomposition(const SimState& s,
                                      const VehicleParams& p) {
  const double ratio = p.inertia_ratio();
  const double phi = (1.0 - ratio) * s.alpha;  // psi + alpha
  const double im = 1.0 / p.mass;
  const Mat2 jt = j_theta(p);
  const Mat2 r = rotation(phi);

  // Columns 0,1: R J_theta diag(2 w1, 2 w2) / m.
  const Vec2 c0 = r * Vec2{jt.m00, jt.m10} * (2.0 * s.omega1 * im);
  const Vec2 c1 = r * Vec2{jt.m01, jt.m11} * (2.0 * s.omega2 * im);
  // Column 2: R' J_theta [w1^2; w2^2] (1 - I_T/I_B) / m, with
  // d(phi)/dt = (1 - I_T/I_B) dalpha/dt folded into the column.
  const Vec2 w_sq{s.omega1 * s.omega1, s.omega2 * s.omega2};
  const Vec2 c2 = rotation_derivative(phi) * (jt * w_sq) * ((1.0 - ratio) * im);

  AccelDecomposition d;
  d.order = 3;
  d.gain = {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y};
  return d;
}

AccelDecomposition snap_decomposition(const SimState& s,
                                      const VehicleParams& p,
                                      bool alpha_column_verbatim) {
  const double ratio = p.inertia_ratio();
  const double phi = (1.0 - ratio) * s.alpha;
  const double dphi = (1.0 - ratio) * s.dalpha;
  const double im = 1.0 / p.mass;
  const Mat2 jt = j_theta(p);
  const Mat2 r = rotation(phi);
  const Mat2 rp = rotation_derivative(phi);

  const Vec2 w_sq{s.omega1 * s.omega1, s.omega2 * s.omega2};
  const Vec2 dw_sq{2.0 * s.omega1 * s.domega1, 2.0 * s.omega2 * s.domega2};
  const Vec2 ddw_rate{2.0 * s.domega1 * s.domega1, 2.0 * s.domega2 * s.domega2};

  // Differentiating the jerk once more: R'' = -R, so the input-free part is
  //   -R phidot^2 J w  +  2 R' phidot J wdot  +  R J (2 wdot^2 terms).
  const Vec2 jw = jt * w_sq;
  const Vec2 jdw = jt * dw_sq;
  AccelDecomposition d;
  d.order = 4;
  d.bias = (r * jw * (-dphi * dphi) + rp * jdw * (2.0 * dphi) +
            r * (jt * ddw_rate)) * im;

  const Vec2 c0 = r * Vec2{jt.m00, jt.m10} * (2.0 * s.omega1 * im);
  const Vec2 c1 = r * Vec2{jt.m01, jt.m11} * (2.0 * s.omega2 * im);
  const double tilt_factor = alpha_column_verbatim ? 1.0 : (1.0 - ratio);
  const Vec2 c2 = rp * jw * (tilt_factor * im);
  d.gain = {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y};
  return d;
}

SimState state_derivative(const SimState& s, const ControlCommand& cmd,
                          const VehicleParams& p) {
  const bool needs_extended = cmd.kind == ControllerKind::FL4;
  if (s.extended != needs_extended) throw ExtensionMismatch();

  SimState d;
  d.extended = s.extended;
  d.x = s.vx;
  d.y = s.vy;
  const Vec2 a = body_accel(s, p);
  d.vx = a.x;
  d.vy = a.y;

  switch (cmd.kind) {
    case ControllerKind::FL3:
      d.omega1 = cmd.values[0];
      d.omega2 = cmd.values[1];
      d.alpha = cmd.values[2];
      break;
    case ControllerKind::FL4:
      d.omega1 = s.domega1;
      d.omega2 = s.domega2;
      d.alpha = s.dalpha;
      d.domega1 = cmd.values[0];
      d.domega2 = cmd.values[1];
      d.dalpha = cmd.values[2];
      break;
    case ControllerKind::Gait:
      // Speeds and tilt are held algebraically by the engine.
      break;
  }
  return d;
}

}  // namespace tiltsim
