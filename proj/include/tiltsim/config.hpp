#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiltsim/io.hpp"

namespace tiltsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one experiment needs: simulation setup, vehicle constants,
/// reference geometry, controller gains and compatibility switches.
struct ExperimentConfig {
  std::string name = "run";
  SimConfig sim{};
  VehicleParams vehicle{};
  CircleSpec circle{};
  std::vector<double> gains_x;  ///< sized by the controller order
  std::vector<double> gains_y;
  DriftParams drift{};

  Gains gains() const;
  void validate() const;
};

/// Stock experiment configurations.
///   fl3_10s   — third-derivative law, 10 s
///   fl3_2000s — third-derivative law, 2000 s (input drift develops)
///   gait_10s  — scheduled-tilt PD, 10 s (saturation episode near 3 s)
///   fl4_long  — fourth-derivative law, 3e4 s (saturation then divergence)
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Applies one `section.key = value` assignment. Throws ConfigError for
/// unknown keys or unparsable values.
void apply_key(ExperimentConfig& config, const std::string& key,
               const std::string& value);

/// Parses a key-value config file ('#' starts a comment). `sweep.*` keys are
/// collected into the returned grid axes instead of being applied.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct ParsedConfig {
  ExperimentConfig base;
  std::vector<SweepAxis> sweep;
};

ParsedConfig parse_config_file(const std::filesystem::path& path,
                               const ExperimentConfig& defaults = {});

/// Cross product of the sweep axes, in file order; each cell is the list of
/// (key, value) overrides to apply on top of the base config.
std::vector<std::vector<std::pair<std::string, std::string>>> sweep_cells(
    const std::vector<SweepAxis>& axes);

}  // namespace tiltsim
