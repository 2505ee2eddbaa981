#include "tiltsim/sim_engine.hpp"

#include <cmath>

namespace tiltsim {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::SaturationOn: return "saturation_on";
    case EventKind::SaturationOff: return "saturation_off";
    case EventKind::SingularityFloor: return "singularity_floor";
    case EventKind::DriftOnset: return "drift_onset";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (t_end != 0.0 && !(t_end >= dt)) {
    throw std::invalid_argument("t_end must be 0 or at least dt");
  }
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (initial.omega1 < 0.0 || initial.omega2 < 0.0) {
    throw std::invalid_argument("initial propeller speeds must be >= 0");
  }
  if (!initial.finite()) throw std::invalid_argument("initial state not finite");
  if ((controller == ControllerKind::FL4) != initial.extended) {
    throw std::invalid_argument(
        "state extension level does not match the controller");
  }
}

namespace {

struct Loop {
  const SimConfig& config;
  const VehicleParams& params;
  const Gains& gains;
  const CircleSpec& spec;
  const double inertia_ratio;

  SimResult result{};
  bool have_baseline = false;
  std::array<bool, 2> sat{false, false};
  bool singular = false;
  std::array<bool, 2> clamp_active{false, false};
  double prev_center_raw = 0.0;
  double center_unwrapped = 0.0;
  bool have_center = false;

  // May throw RankDeficient (both speeds at the floor).
  ControlCommand eval(const SimState& s, double t) const {
    switch (config.controller) {
      case ControllerKind::FL3:
        return fl3_control(s, circle_sample(spec, t), gains, params,
                           config.options);
      case ControllerKind::Gait:
        return gait_control(s, circle_sample(spec, t), gains, params, spec, t,
                            config.options);
      case ControllerKind::FL4:
      default:
        return fl4_control(s, circle_sample(spec, t), gains, params,
                           config.options);
    }
  }

  ControlCommand eval_logged(const SimState& s, double t) {
    try {
      return eval(s, t);
    } catch (const RankDeficient& e) {
      // No invertible channel left; hold a zero command for this step.
      result.events.push_back({t, EventKind::SingularityFloor, -1, e.gram_det});
      ControlCommand cmd;
      cmd.kind = config.controller;
      cmd.singular = true;
      if (config.controller == ControllerKind::Gait) {
        cmd.values[2] =
            gait_alpha(t, params, spec, config.options.raw_gait_schedule);
      }
      return cmd;
    }
  }

  void apply_algebraic(SimState& s, const ControlCommand& cmd) const {
    if (cmd.kind != ControllerKind::Gait) return;
    s.omega1 = std::sqrt(cmd.values[0]);
    s.omega2 = std::sqrt(cmd.values[1]);
    s.alpha = cmd.values[2];
  }

  void track_command_flags(const ControlCommand& cmd, double t) {
    // The first command fixes the baseline; events record transitions.
    std::array<bool, 2> now =
        config.controller == ControllerKind::Gait ? cmd.saturated : sat;
    if (!have_baseline) {
      sat = now;
      singular = cmd.singular;
      have_baseline = true;
      return;
    }
    for (int c = 0; c < 2; ++c) {
      if (now[c] != sat[c]) {
        result.events.push_back({t, now[c] ? EventKind::SaturationOn
                                           : EventKind::SaturationOff,
                                 c, 0.0});
        sat[c] = now[c];
      }
    }
    if (cmd.singular && !singular) {
      result.events.push_back(
          {t, EventKind::SingularityFloor, -1, config.options.omega_floor});
    }
    singular = cmd.singular;
  }

  void project_omegas(SimState& s, double t) {
    double* speeds[2] = {&s.omega1, &s.omega2};
    for (int c = 0; c < 2; ++c) {
      if (*speeds[c] < 0.0) {
        *speeds[c] = 0.0;
        if (!clamp_active[c]) {
          result.events.push_back({t, EventKind::SaturationOn, c, 0.0});
          clamp_active[c] = true;
          sat[c] = true;
        }
      } else if (clamp_active[c]) {
        result.events.push_back({t, EventKind::SaturationOff, c, 0.0});
        clamp_active[c] = false;
        sat[c] = false;
      }
    }
  }

  void record(double t, const SimState& s, const ControlCommand& cmd) {
    SimRecord r;
    r.t = t;
    r.state = s;
    r.command = cmd;
    const ReferenceSample ref = circle_sample(spec, t);
    r.ref_pos = ref.pos;
    r.err = ref.pos - s.pos();
    r.omega1_sq = s.omega1 * s.omega1;
    r.omega2_sq = s.omega2 * s.omega2;
    r.psi = psi_from_alpha(s.alpha, params);
    r.dir_mid = (1.0 - inertia_ratio) * s.alpha;
    r.dir_upper = r.dir_mid + params.theta;
    r.dir_lower = r.dir_mid - params.theta;
    double raw = prev_center_raw;
    try {
      raw = center_direction(s.pos(), spec);
    } catch (const AtCenter&) {
    }
    if (!have_center) {
      center_unwrapped = raw;
      have_center = true;
    } else {
      center_unwrapped += wrap_angle(raw - prev_center_raw);
    }
    prev_center_raw = raw;
    r.dir_center = center_unwrapped;
    r.sat1 = sat[0];
    r.sat2 = sat[1];
    result.records.push_back(r);
  }
};

}  // namespace

SimResult run_simulation(const SimConfig& config, const VehicleParams& params,
                         const Gains& gains, const CircleSpec& spec) {
  config.validate();
  params.validate();
  spec.validate();

  Loop loop{config, params, gains, spec, params.inertia_ratio()};
  const long n = std::lround(config.t_end / config.dt);
  loop.result.records.reserve(static_cast<size_t>(n / config.record_stride) + 2);

  SimState state = config.initial;
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const ControlCommand cmd = loop.eval_logged(state, t);
    loop.apply_algebraic(state, cmd);
    loop.track_command_flags(cmd, t);
    if (k % config.record_stride == 0) loop.record(t, state, cmd);

    if (config.control_mode == ControlMode::Hold) {
      auto rhs = [&](const SimState& s, double) {
        return state_derivative(s, cmd, params);
      };
      state = rk3_step(state, t, config.dt, rhs);
    } else {
      auto rhs = [&](const SimState& s, double ts) {
        ControlCommand c;
        try {
          c = loop.eval(s, ts);
        } catch (const RankDeficient&) {
          c = cmd;
        }
        SimState sa = s;
        loop.apply_algebraic(sa, c);
        return state_derivative(sa, c, params);
      };
      state = rk3_step(state, t, config.dt, rhs);
    }

    if (!state.finite()) throw NonFiniteState(t + config.dt);
    if (config.controller != ControllerKind::Gait) {
      loop.project_omegas(state, t + config.dt);
    }
  }

  const double t_end = static_cast<double>(n) * config.dt;
  const ControlCommand cmd = loop.eval_logged(state, t_end);
  loop.apply_algebraic(state, cmd);
  loop.track_command_flags(cmd, t_end);
  loop.record(t_end, state, cmd);
  return loop.result;
}

}  // namespace tiltsim
