#include "tiltsim/metrics.hpp"

#include <cmath>

namespace tiltsim {

DirectionBand thrust_direction_band(const SimState& s, const CircleSpec& spec,
                                    const VehicleParams& p) {
  DirectionBand b;
  b.mid = wrap_angle(s.alpha + psi_from_alpha(s.alpha, p));
  b.upper = b.mid + p.theta;
  b.lower = b.mid - p.theta;
  b.to_center = center_direction(s.pos(), spec);
  return b;
}

DriftReport drift_metric(const std::vector<SimRecord>& records,
                         const DriftParams& params) {
  if (records.empty()) throw std::invalid_argument("empty record stream");

  DriftReport rep;
  const size_t n = records.size();
  rep.t.reserve(n);
  rep.d.reserve(n);
  for (const SimRecord& r : records) {
    rep.t.push_back(r.t);
    rep.d.push_back(std::fabs(r.omega1_sq - r.omega2_sq));
  }
  rep.d_at_end = rep.d.back();

  // Earliest sample from which the error norm stays below eps_settle for a
  // full window.
  size_t settle_idx = n;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (records[i].t + params.settle_window > records.back().t) break;
    bool ok = true;
    for (size_t j = i; j < n && records[j].t <= records[i].t + params.settle_window;
         ++j) {
      if (records[j].err.norm() >= params.eps_settle) {
        ok = false;
        break;
      }
    }
    if (ok) {
      settle_idx = i;
      break;
    }
  }
  if (settle_idx == n) return rep;  // never settled

  rep.settled = true;
  rep.settle_time = records[settle_idx].t;
  rep.d_at_settle = rep.d[settle_idx];

  // Least-squares slope of d(t) over [t_s, end].
  double st = 0.0, sd = 0.0, stt = 0.0, std_ = 0.0;
  const size_t m = n - settle_idx;
  for (size_t i = settle_idx; i < n; ++i) {
    st += rep.t[i];
    sd += rep.d[i];
  }
  const double mt = st / m;
  const double md = sd / m;
  for (size_t i = settle_idx; i < n; ++i) {
    stt += (rep.t[i] - mt) * (rep.t[i] - mt);
    std_ += (rep.t[i] - mt) * (rep.d[i] - md);
  }
  rep.post_settle_slope = stt > 0.0 ? std_ / stt : 0.0;

  rep.detected = rep.post_settle_slope > params.slope_threshold &&
                 rep.d_at_end > params.growth_ratio * rep.d_at_settle;

  const double threshold = params.growth_ratio * rep.d_at_settle;
  for (size_t i = settle_idx + 1; i < n; ++i) {
    if (rep.d[i] > threshold) {
      rep.onset_time = rep.t[i];
      break;
    }
  }
  return rep;
}

SaturationSummary detect_saturation(const EventLog& events,
                                    const std::vector<SimRecord>& records) {
  SaturationSummary sum;
  const double t_end = records.empty() ? 0.0 : records.back().t;
  for (int c = 0; c < 2; ++c) {
    ChannelSaturation& ch = sum.channels[c];
    ch.channel = c;
    if (!records.empty()) {
      ch.initially_saturated = c == 0 ? records.front().sat1 : records.front().sat2;
    }

    bool on = ch.initially_saturated;
    double on_since = records.empty() ? 0.0 : records.front().t;
    for (const Event& e : events) {
      if (e.channel != c) continue;
      if (e.kind == EventKind::SaturationOn && !on) {
        on = true;
        on_since = e.t;
        ch.event_count += 1;
        if (!ch.first_event_time) ch.first_event_time = e.t;
      } else if (e.kind == EventKind::SaturationOff && on) {
        on = false;
        ch.total_duration += e.t - on_since;
      }
    }
    if (on) ch.total_duration += t_end - on_since;

    if (!records.empty()) {
      size_t hits = 0;
      for (const SimRecord& r : records) {
        if (c == 0 ? r.sat1 : r.sat2) ++hits;
      }
      ch.fraction_of_samples = static_cast<double>(hits) / records.size();
    }
  }
  return sum;
}

}  // namespace tiltsim
