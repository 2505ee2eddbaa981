#pragma once

#include <array>

namespace tiltsim {

enum class ControllerKind { FL3, Gait, FL4 };

/// One controller output, valid over one sampling interval.
///
/// Meaning of `values` by kind:
///   FL3  : (domega1/dt, domega2/dt, dalpha/dt) — first input derivatives
///   Gait : (omega1^2, omega2^2, alpha)         — squared speeds after
///          clamping, plus the scheduled tilt angle
///   FL4  : (d2omega1/dt2, d2omega2/dt2, d2alpha/dt2)
struct ControlCommand {
  ControllerKind kind = ControllerKind::FL3;
  std::array<double, 3> values{0.0, 0.0, 0.0};
  std::array<bool, 2> saturated{false, false};
  bool singular = false;
};

}  // namespace tiltsim
