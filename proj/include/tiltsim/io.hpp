#pragma once

#include <filesystem>
#include <string>

#include "tiltsim/metrics.hpp"

namespace tiltsim {

/// Fixed column set of the time-series file, one row per recorded sample.
/// Values are written in shortest round-trip form, so parsing the file back
/// reproduces the in-memory doubles exactly.
inline constexpr const char* kTimeseriesHeader =
    "t,x,y,vx,vy,omega1,omega2,alpha,psi,x_r,y_r,err_x,err_y,"
    "omega1_sq,omega2_sq,dir_mid,dir_upper,dir_lower,dir_center,sat1,sat2";

std::string timeseries_csv(const std::vector<SimRecord>& records);
void write_timeseries_csv(const std::filesystem::path& path,
                          const std::vector<SimRecord>& records);

/// Parses a file produced by write_timeseries_csv. Only the columns above are
/// recovered (command payloads are not serialized).
std::vector<SimRecord> read_timeseries_csv(const std::filesystem::path& path);

std::string events_json(const EventLog& events);
void write_events_json(const std::filesystem::path& path, const EventLog& events);

/// Run report: drift and saturation summaries plus run metadata. Matches
/// schemas/report.schema.json.
struct RunReport {
  std::string controller;
  double dt = 0.0;
  double t_end = 0.0;
  long samples = 0;
  DriftReport drift;
  SaturationSummary saturation;
  Vec2 final_error{};
};

std::string report_json(const RunReport& report);
void write_report_json(const std::filesystem::path& path, const RunReport& report);

}  // namespace tiltsim
