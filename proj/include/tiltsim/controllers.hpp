#pragma once

#include <limits>
#include <vector>

#include "tiltsim/command.hpp"
#include "tiltsim/dynamics.hpp"
#include "tiltsim/reference.hpp"

namespace tiltsim {

struct DegenerateInertia : std::domain_error {
  DegenerateInertia()
      : std::domain_error("i_t = i_b: the scheduled tilt angle is undefined") {}
};

/// Per-axis error-feedback coefficients. Length fixes the controller order:
/// 2 for the gait PD, 3 for third-derivative, 4 for fourth-derivative
/// feedback linearization. Construction rejects non-Hurwitz closures.
class Gains {
 public:
  Gains(std::vector<double> kx, std::vector<double> ky);

  /// All poles of s^n + k1 s^{n-1} + ... + kn placed at `pole` (< 0).
  static Gains from_pole(int order, double pole);

  const std::vector<double>& kx() const { return kx_; }
  const std::vector<double>& ky() const { return ky_; }
  int order() const { return static_cast<int>(kx_.size()); }

 private:
  std::vector<double> kx_;
  std::vector<double> ky_;
};

/// True iff s^n + k1 s^{n-1} + ... + kn has all roots in the open left half
/// plane (Routh-Hurwitz, n <= 4).
bool is_hurwitz(const std::vector<double>& k);

/// Controller tuning knobs shared by the three laws.
struct ControlOptions {
  /// Floor applied to the propeller speeds before building the decoupling
  /// matrix, so its pseudo-inverse survives a clamped channel.
  double omega_floor = 1e-6;
  /// Upper clamp on the gait controller's squared-speed commands
  /// (infinity = none).
  double omega_sq_max = std::numeric_limits<double>::infinity();
  /// Use the tilt schedule without the phase offset to the circle center.
  bool raw_gait_schedule = false;
  /// Use the printed tilt column of the fourth-derivative decomposition
  /// (drops the yaw-coupling factor).
  bool eq27_verbatim = false;
};

/// Third-derivative feedback linearization: rate commands
///   pinv(jerk gain) * (ref jerk + k1 (acc err) + k2 (vel err) + k3 (pos err)),
/// with the measured acceleration taken from the model. Gains of order 3.
ControlCommand fl3_control(const SimState& s, const ReferenceSample& ref,
                           const Gains& g, const VehicleParams& p,
                           const ControlOptions& opts = {});

/// Scheduled tilt angle: (phi0 + w_ref t) / (1 - I_T/I_B), where phi0 is the
/// direction from the circle start to its center and w_ref the signed angular
/// rate. Keeps psi + alpha aimed at the circle center for a vehicle on the
/// reference. With `raw` the schedule is t / (1 - I_T/I_B) unchanged.
double gait_alpha(double t, const VehicleParams& p, const CircleSpec& spec,
                  bool raw = false);

/// Dynamic-inversion PD with the tilt angle pre-scheduled: solves
///   [w1^2; w2^2] = m (R J_theta)^{-1} (ref acc + k1 (vel err) + k2 (pos err))
/// and clamps each squared speed to [0, omega_sq_max], flagging saturation.
/// Gains of order 2.
ControlCommand gait_control(const SimState& s, const ReferenceSample& ref,
                            const Gains& g, const VehicleParams& p,
                            const CircleSpec& spec, double t,
                            const ControlOptions& opts = {});

/// Fourth-derivative feedback linearization: acceleration commands
///   pinv(snap gain) * (v - snap bias)
/// with v = ref snap + k1 (jerk err) + k2 (acc err) + k3 (vel err)
/// + k4 (pos err); measured jerk and acceleration come from the model applied
/// to the extended state. Gains of order 4.
ControlCommand fl4_control(const SimState& s, const ReferenceSample& ref,
                           const Gains& g, const VehicleParams& p,
                           const ControlOptions& opts = {});

}  // namespace tiltsim
