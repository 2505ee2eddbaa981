#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tiltsim/sim_engine.hpp"

namespace tiltsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Max relative error of the analytic third-derivative decomposition against
/// central finite differences of the acceleration along random smooth input
/// trajectories.
double fd_jerk_max_rel_error(const VehicleParams& p, int trajectories = 20,
                             unsigned seed = 2024);

/// Same for the fourth derivative (second differences of the acceleration).
/// With `eq27_verbatim` the decomposition under test drops the yaw-coupling
/// factor in the tilt column and the error becomes O(1).
double fd_snap_max_rel_error(const VehicleParams& p, int trajectories = 20,
                             unsigned seed = 2025, bool eq27_verbatim = false);

/// Max infinity-norm of d * pinv(d) - I over random full-row-rank matrices.
double pinv_identity_max_error(int samples = 1000, unsigned seed = 7);

/// Global-error ratios for dy/dt = y over [0, 1] when halving dt across
/// {0.1, 0.05, 0.025}. A third-order scheme gives ratios near 8.
std::pair<double, double> integrator_error_ratios(
    const Rk3Tableau& tab = kOde3Tableau);

/// Closed-loop equivalence with the matched linear error ODE: simulates the
/// feedback-linearized loop from an on-reference state with a small position
/// offset (no saturation) and compares the per-axis position error against an
/// independently integrated linear ODE. Returns the max error relative to the
/// peak oracle error. `kind` must be FL3 or FL4.
double linear_ode_equivalence_error(ControllerKind kind);

/// The full oracle suite, in the order the checks are reported.
std::vector<CheckResult> verify_all(bool eq27_verbatim = false);

}  // namespace tiltsim
