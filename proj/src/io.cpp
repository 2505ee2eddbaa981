#include "tiltsim/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tiltsim {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json number_or_null(bool valid, double v) {
  if (!valid) return nullptr;
  return v;
}

}  // namespace

std::string timeseries_csv(const std::vector<SimRecord>& records) {
  std::string out;
  out.reserve(records.size() * 220 + 256);
  out += kTimeseriesHeader;
  out += '\n';
  for (const SimRecord& r : records) {
    const double cols[] = {r.t,          r.state.x,    r.state.y,
                           r.state.vx,   r.state.vy,   r.state.omega1,
                           r.state.omega2, r.state.alpha, r.psi,
                           r.ref_pos.x,  r.ref_pos.y,  r.err.x,
                           r.err.y,      r.omega1_sq,  r.omega2_sq,
                           r.dir_mid,    r.dir_upper,  r.dir_lower,
                           r.dir_center};
    bool first = true;
    for (double c : cols) {
      if (!first) out += ',';
      append_double(out, c);
      first = false;
    }
    out += r.sat1 ? ",1" : ",0";
    out += r.sat2 ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

void write_timeseries_csv(const std::filesystem::path& path,
                          const std::vector<SimRecord>& records) {
  write_file(path, timeseries_csv(records));
}

std::vector<SimRecord> read_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != kTimeseriesHeader) {
    throw std::runtime_error("unexpected time-series header in " + path.string());
  }

  std::vector<SimRecord> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double v[19];
    int sat[2];
    const char* p = line.c_str();
    for (int i = 0; i < 19; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p || *end != ',') {
        throw std::runtime_error("malformed row in " + path.string());
      }
      p = end + 1;
    }
    for (int i = 0; i < 2; ++i) {
      char* end = nullptr;
      sat[i] = static_cast<int>(std::strtol(p, &end, 10));
      p = (i == 0) ? end + 1 : end;
    }

    SimRecord r;
    r.t = v[0];
    r.state.x = v[1];
    r.state.y = v[2];
    r.state.vx = v[3];
    r.state.vy = v[4];
    r.state.omega1 = v[5];
    r.state.omega2 = v[6];
    r.state.alpha = v[7];
    r.psi = v[8];
    r.ref_pos = {v[9], v[10]};
    r.err = {v[11], v[12]};
    r.omega1_sq = v[13];
    r.omega2_sq = v[14];
    r.dir_mid = v[15];
    r.dir_upper = v[16];
    r.dir_lower = v[17];
    r.dir_center = v[18];
    r.sat1 = sat[0] != 0;
    r.sat2 = sat[1] != 0;
    out.push_back(r);
  }
  return out;
}

std::string events_json(const EventLog& events) {
  nlohmann::json j;
  j["events"] = nlohmann::json::array();
  for (const Event& e : events) {
    j["events"].push_back({{"t", e.t},
                           {"kind", event_kind_name(e.kind)},
                           {"channel", e.channel},
                           {"value", e.value}});
  }
  return j.dump(2) + "\n";
}

void write_events_json(const std::filesystem::path& path, const EventLog& events) {
  write_file(path, events_json(events));
}

std::string report_json(const RunReport& report) {
  nlohmann::json j;
  j["controller"] = report.controller;
  j["dt"] = report.dt;
  j["t_end"] = report.t_end;
  j["samples"] = report.samples;

  const DriftReport& d = report.drift;
  j["drift"] = {
      {"settled", d.settled},
      {"settle_time", number_or_null(d.settled, d.settle_time)},
      {"post_settle_slope", number_or_null(d.settled, d.post_settle_slope)},
      {"d_at_settle", number_or_null(d.settled, d.d_at_settle)},
      {"d_at_end", d.d_at_end},
      {"detected", d.detected},
      {"onset_time",
       number_or_null(d.onset_time.has_value(), d.onset_time.value_or(0.0))},
  };

  j["saturation"]["channels"] = nlohmann::json::array();
  for (const ChannelSaturation& ch : report.saturation.channels) {
    j["saturation"]["channels"].push_back(
        {{"channel", ch.channel},
         {"initially_saturated", ch.initially_saturated},
         {"first_event_time", number_or_null(ch.first_event_time.has_value(),
                                             ch.first_event_time.value_or(0.0))},
         {"total_duration", ch.total_duration},
         {"fraction_of_samples", ch.fraction_of_samples},
         {"event_count", ch.event_count}});
  }

  j["final_error"] = {report.final_error.x, report.final_error.y};
  j["final_error_norm"] = report.final_error.norm();
  return j.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path,
                       const RunReport& report) {
  write_file(path, report_json(report));
}

}  // namespace tiltsim
