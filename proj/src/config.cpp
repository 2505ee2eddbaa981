#include "tiltsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tiltsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(key, trim(item)));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

int controller_order(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Gait: return 2;
    case ControllerKind::FL3: return 3;
    case ControllerKind::FL4: return 4;
  }
  return 3;
}

}  // namespace

Gains ExperimentConfig::gains() const {
  const int order = controller_order(sim.controller);
  try {
    if (gains_x.empty()) return Gains::from_pole(order, -2.0);
    std::vector<double> ky = gains_y.empty() ? gains_x : gains_y;
    if (static_cast<int>(gains_x.size()) != order ||
        static_cast<int>(ky.size()) != order) {
      throw std::invalid_argument("gain count does not match controller order");
    }
    return Gains(gains_x, ky);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("gains: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  try {
    sim.validate();
    vehicle.validate();
    circle.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  (void)gains();
}

void apply_key(ExperimentConfig& config, const std::string& key,
               const std::string& value) {
  SimState& init = config.sim.initial;
  ControlOptions& opts = config.sim.options;

  if (key == "name") config.name = value;
  else if (key == "sim.dt") config.sim.dt = to_double(key, value);
  else if (key == "sim.t_end") config.sim.t_end = to_double(key, value);
  else if (key == "sim.record_stride")
    config.sim.record_stride = static_cast<int>(to_long(key, value));
  else if (key == "sim.controller") {
    if (value == "fl3") config.sim.controller = ControllerKind::FL3;
    else if (value == "gait") config.sim.controller = ControllerKind::Gait;
    else if (value == "fl4") config.sim.controller = ControllerKind::FL4;
    else throw ConfigError("unknown controller '" + value + "'");
    init.extended = config.sim.controller == ControllerKind::FL4;
  } else if (key == "sim.control_mode") {
    if (value == "hold") config.sim.control_mode = ControlMode::Hold;
    else if (value == "continuous") config.sim.control_mode = ControlMode::Continuous;
    else throw ConfigError("unknown control mode '" + value + "'");
  }
  else if (key == "vehicle.k_f1") config.vehicle.k_f1 = to_double(key, value);
  else if (key == "vehicle.k_f2") config.vehicle.k_f2 = to_double(key, value);
  else if (key == "vehicle.i_t") config.vehicle.i_t = to_double(key, value);
  else if (key == "vehicle.i_b") config.vehicle.i_b = to_double(key, value);
  else if (key == "vehicle.theta") config.vehicle.theta = to_double(key, value);
  else if (key == "vehicle.mass") config.vehicle.mass = to_double(key, value);
  else if (key == "circle.radius") config.circle.radius = to_double(key, value);
  else if (key == "circle.speed") config.circle.speed = to_double(key, value);
  else if (key == "circle.start_x") config.circle.start.x = to_double(key, value);
  else if (key == "circle.start_y") config.circle.start.y = to_double(key, value);
  else if (key == "circle.center_x") config.circle.center.x = to_double(key, value);
  else if (key == "circle.center_y") config.circle.center.y = to_double(key, value);
  else if (key == "circle.ccw") config.circle.ccw = to_bool(key, value);
  else if (key == "init.x") init.x = to_double(key, value);
  else if (key == "init.y") init.y = to_double(key, value);
  else if (key == "init.vx") init.vx = to_double(key, value);
  else if (key == "init.vy") init.vy = to_double(key, value);
  else if (key == "init.omega1") init.omega1 = to_double(key, value);
  else if (key == "init.omega2") init.omega2 = to_double(key, value);
  else if (key == "init.alpha") init.alpha = to_double(key, value);
  else if (key == "init.domega1") init.domega1 = to_double(key, value);
  else if (key == "init.domega2") init.domega2 = to_double(key, value);
  else if (key == "init.dalpha") init.dalpha = to_double(key, value);
  else if (key == "gains.k") config.gains_x = config.gains_y = to_list(key, value);
  else if (key == "gains.kx") config.gains_x = to_list(key, value);
  else if (key == "gains.ky") config.gains_y = to_list(key, value);
  else if (key == "gains.pole") {
    const double pole = to_double(key, value);
    if (!(pole < 0.0)) throw ConfigError("gains.pole must be negative");
    const int order = controller_order(config.sim.controller);
    const Gains g = Gains::from_pole(order, pole);
    config.gains_x = g.kx();
    config.gains_y = g.ky();
  }
  else if (key == "limits.omega_floor") opts.omega_floor = to_double(key, value);
  else if (key == "limits.omega_sq_max") opts.omega_sq_max = to_double(key, value);
  else if (key == "compat.raw_gait_schedule")
    opts.raw_gait_schedule = to_bool(key, value);
  else if (key == "compat.eq27_verbatim") opts.eq27_verbatim = to_bool(key, value);
  else if (key == "drift.eps_settle") config.drift.eps_settle = to_double(key, value);
  else if (key == "drift.settle_window")
    config.drift.settle_window = to_double(key, value);
  else if (key == "drift.slope_threshold")
    config.drift.slope_threshold = to_double(key, value);
  else if (key == "drift.growth_ratio")
    config.drift.growth_ratio = to_double(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.sim.initial.omega1 = 200.0;
  c.sim.initial.omega2 = 200.0;

  if (name == "fl3_10s") {
    c.sim.controller = ControllerKind::FL3;
    c.sim.t_end = 10.0;
    c.sim.record_stride = 1;
  } else if (name == "fl3_2000s") {
    c.sim.controller = ControllerKind::FL3;
    c.sim.t_end = 2000.0;
    c.sim.record_stride = 100;
  } else if (name == "gait_10s") {
    c.sim.controller = ControllerKind::Gait;
    c.sim.t_end = 10.0;
    c.sim.record_stride = 1;
    // Underdamped tuning: the transient rings long enough to re-enter
    // saturation around t = 3 s, and the inputs still converge by 10 s.
    c.gains_x = c.gains_y = {1.2, 4.0};
  } else if (name == "fl4_long") {
    c.sim.controller = ControllerKind::FL4;
    c.sim.t_end = 3e4;
    c.sim.record_stride = 100;
    c.sim.initial.extended = true;
    // Two underdamped pairs: the transient dips one propeller to zero within
    // a few seconds without losing the loop.
    c.gains_x = c.gains_y = {6.0, 31.5, 67.5, 126.5625};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"fl3_10s", "fl3_2000s", "gait_10s", "fl4_long"};
}

ParsedConfig parse_config_file(const std::filesystem::path& path,
                               const ExperimentConfig& defaults) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path.string());

  ParsedConfig out;
  out.base = defaults;
  if (out.base.name == "run") out.base.name = path.stem().string();

  bool stride_set = false;
  bool t_end_set = false;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }

    if (key.rfind("sweep.", 0) == 0) {
      SweepAxis axis;
      axis.key = key.substr(6);
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) axis.values.push_back(trim(item));
      if (axis.values.empty()) throw ConfigError("empty sweep axis " + key);
      out.sweep.push_back(std::move(axis));
      continue;
    }

    if (key == "sim.record_stride") stride_set = true;
    if (key == "sim.t_end") t_end_set = true;
    try {
      apply_key(out.base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }

  // Long runs default to a coarser record stride.
  if (t_end_set && !stride_set && out.base.sim.t_end > 100.0) {
    out.base.sim.record_stride = 100;
  }
  return out;
}

std::vector<std::vector<std::pair<std::string, std::string>>> sweep_cells(
    const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, std::string>>> cells{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (const std::string& v : axis.values) {
        auto copy = cell;
        copy.emplace_back(axis.key, v);
        next.push_back(std::move(copy));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace tiltsim
