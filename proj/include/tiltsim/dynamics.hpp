#pragma once

#include <cmath>
#include <stdexcept>

#include "tiltsim/command.hpp"
#include "tiltsim/linalg.hpp"

namespace tiltsim {

/// Physical constants of the planar tilt vehicle.
struct VehicleParams {
  double k_f1 = 1e-3;   ///< thrust coefficient, propeller 1 (force / (rad/s)^2)
  double k_f2 = 1e-3;   ///< thrust coefficient, propeller 2
  double i_t = 1e-3;    ///< rotational inertia, top disc
  double i_b = 2e-3;    ///< rotational inertia, bottom disc
  double theta = M_PI / 6.0;  ///< propeller half-angle
  double mass = 1.0;

  double inertia_ratio() const { return i_t / i_b; }

  void validate() const;
};

/// Integrated state. The tilt/speed rate fields are meaningful only when
/// `extended` is set (fourth-derivative control); they stay zero otherwise.
struct SimState {
  double x = 0.0, y = 0.0;
  double vx = 0.0, vy = 0.0;
  double omega1 = 0.0, omega2 = 0.0;
  double alpha = 0.0;
  double domega1 = 0.0, domega2 = 0.0, dalpha = 0.0;
  bool extended = false;

  Vec2 pos() const { return {x, y}; }
  Vec2 vel() const { return {vx, vy}; }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(vx) &&
           std::isfinite(vy) && std::isfinite(omega1) &&
           std::isfinite(omega2) && std::isfinite(alpha) &&
           std::isfinite(domega1) && std::isfinite(domega2) &&
           std::isfinite(dalpha);
  }
};

// Fieldwise arithmetic so SimState doubles as its own time derivative in the
// Runge-Kutta stepper.
inline SimState operator+(const SimState& a, const SimState& b) {
  SimState r = a;
  r.x += b.x;
  r.y += b.y;
  r.vx += b.vx;
  r.vy += b.vy;
  r.omega1 += b.omega1;
  r.omega2 += b.omega2;
  r.alpha += b.alpha;
  r.domega1 += b.domega1;
  r.domega2 += b.domega2;
  r.dalpha += b.dalpha;
  return r;
}

inline SimState operator*(double s, const SimState& a) {
  SimState r = a;
  r.x *= s;
  r.y *= s;
  r.vx *= s;
  r.vy *= s;
  r.omega1 *= s;
  r.omega2 *= s;
  r.alpha *= s;
  r.domega1 *= s;
  r.domega2 *= s;
  r.dalpha *= s;
  return r;
}

/// Input-affine decomposition of a position derivative of the given order:
///   derivative = bias + gain * u
/// where u is the vector of input derivatives of matching order. For order 3
/// the bias is identically zero.
struct AccelDecomposition {
  int order = 3;
  Vec2 bias{};
  Mat2x3 gain{};
};

struct NegativeOmega : std::domain_error {
  explicit NegativeOmega(double omega)
      : std::domain_error("negative propeller speed: " + std::to_string(omega)) {}
};

struct ExtensionMismatch : std::logic_error {
  ExtensionMismatch()
      : std::logic_error("command kind does not match state extension level") {}
};

/// F = k_f * omega^2. Throws NegativeOmega for omega < 0.
double thrust(double omega, double k_f);

/// Yaw from tilt under the angular-momentum coupling: psi = -(I_T/I_B) alpha.
inline double psi_from_alpha(double alpha, const VehicleParams& p) {
  return -p.inertia_ratio() * alpha;
}

/// Thrust-mix matrix: diag(cos theta, sin theta) * [[k1, k2], [k1, -k2]].
Mat2 j_theta(const VehicleParams& p);

/// Translational acceleration (1/m) R(psi+alpha) J_theta [w1^2; w2^2].
Vec2 body_accel(const SimState& s, const VehicleParams& p);

/// Third position derivative as gain * (domega1, domega2, dalpha).
/// The gain loses row rank exactly when omega1 = 0 or omega2 = 0.
AccelDecomposition jerk_decomposition(const SimState& s, const VehicleParams& p);

/// Fourth position derivative as bias + gain * (ddomega1, ddomega2, ddalpha).
/// Requires an extended state (the bias collects every term carrying a first
/// derivative of the inputs).
///
/// With `alpha_column_verbatim` the tilt column omits the (1 - I_T/I_B)
/// chain-rule factor from the yaw coupling; the decomposition then no longer
/// reproduces the true fourth derivative. Kept for comparison runs.
AccelDecomposition snap_decomposition(const SimState& s, const VehicleParams& p,
                                      bool alpha_column_verbatim = false);

/// Closed-loop ODE right-hand side. Position/velocity kinematics plus the
/// input-channel integrators matching the command kind:
///   FL3  — d/dt (omega1, omega2, alpha) = command values
///   FL4  — d/dt (rates) = command values, speeds/tilt integrate their rates
///   Gait — speeds and tilt are algebraic (set by the engine, not integrated)
SimState state_derivative(const SimState& s, const ControlCommand& cmd,
                          const VehicleParams& p);

}  // namespace tiltsim
