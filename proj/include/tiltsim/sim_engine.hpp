#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tiltsim/controllers.hpp"

namespace tiltsim {

/// Third-order Runge-Kutta tableau. The default is the Bogacki-Shampine
/// scheme, the method behind fixed-step "ODE3" solvers.
struct Rk3Tableau {
  double c2 = 0.5, c3 = 0.75;
  double a21 = 0.5, a32 = 0.75;
  double b1 = 2.0 / 9.0, b2 = 3.0 / 9.0, b3 = 4.0 / 9.0;
};

inline constexpr Rk3Tableau kOde3Tableau{};

/// One fixed step of the explicit three-stage scheme. Works for any state
/// type with fieldwise `+` and scalar `*` (doubles included).
template <class State, class Rhs>
State rk3_step(const State& s, double t, double dt, Rhs&& f,
               const Rk3Tableau& tab = kOde3Tableau) {
  const State k1 = f(s, t);
  const State k2 = f(s + (dt * tab.a21) * k1, t + dt * tab.c2);
  const State k3 = f(s + (dt * tab.a32) * k2, t + dt * tab.c3);
  return s + dt * (tab.b1 * k1 + tab.b2 * k2 + tab.b3 * k3);
}

struct NonFiniteState : std::runtime_error {
  double t;
  explicit NonFiniteState(double time)
      : std::runtime_error("state became non-finite at t = " +
                           std::to_string(time)),
        t(time) {}
};

enum class EventKind { SaturationOn, SaturationOff, SingularityFloor, DriftOnset };

const char* event_kind_name(EventKind k);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::SaturationOn;
  int channel = -1;  ///< 0/1 for the propellers, -1 when not channel-bound
  double value = 0.0;
};

using EventLog = std::vector<Event>;

/// When the controller is evaluated: once per step and held across the
/// Runge-Kutta stages (the sampled setup), or re-evaluated at every stage
/// (the continuous closed loop, useful for construction checks).
enum class ControlMode { Hold, Continuous };

struct SimConfig {
  double dt = 0.01;
  double t_end = 10.0;
  ControllerKind controller = ControllerKind::FL3;
  SimState initial{};
  int record_stride = 1;
  ControlMode control_mode = ControlMode::Hold;
  ControlOptions options{};

  void validate() const;
};

/// One recorded sample: state and command at the step start, plus the
/// diagnostics every experiment plots. Direction angles are unwrapped
/// (cumulative) so the traces stay continuous.
struct SimRecord {
  double t = 0.0;
  SimState state{};
  ControlCommand command{};
  Vec2 ref_pos{};
  Vec2 err{};  ///< reference minus position
  double omega1_sq = 0.0, omega2_sq = 0.0;
  double psi = 0.0;
  double dir_mid = 0.0, dir_upper = 0.0, dir_lower = 0.0;
  double dir_center = 0.0;
  bool sat1 = false, sat2 = false;
};

struct SimResult {
  std::vector<SimRecord> records;
  EventLog events;
};

/// Fixed-step closed-loop simulation. Deterministic: identical inputs give
/// bit-identical results. Propeller speeds are projected to >= 0 after each
/// step; clamp transitions, singularity-floor engagements and (for the gait
/// law) command clamping are logged as events. The saturation state of the
/// first evaluated command is the event baseline; events record transitions.
SimResult run_simulation(const SimConfig& config, const VehicleParams& params,
                         const Gains& gains, const CircleSpec& spec);

}  // namespace tiltsim
