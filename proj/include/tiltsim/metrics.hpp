#pragma once

#include <optional>

#include "tiltsim/sim_engine.hpp"

namespace tiltsim {

/// Position error (reference minus state).
inline Vec2 dynamic_error(const SimState& s, const ReferenceSample& ref) {
  return ref.pos - s.pos();
}

/// Admissible thrust-direction interval around the mid direction alpha + psi,
/// together with the direction to the circle center. Angles wrapped to
/// (-pi, pi]; the band edges sit exactly +-theta around the mid value.
struct DirectionBand {
  double mid = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double to_center = 0.0;
};

DirectionBand thrust_direction_band(const SimState& s, const CircleSpec& spec,
                                    const VehicleParams& p);

/// Detector thresholds for the input-drift diagnostic. The defaults separate
/// the three stock scenarios; all are configurable.
struct DriftParams {
  double eps_settle = 0.1;      ///< error norm counted as settled
  double settle_window = 2.0;   ///< seconds the error must stay settled
  double slope_threshold = 1.0; ///< least-squares d(t) slope, (rad/s)^2 per s
  double growth_ratio = 10.0;   ///< required d(end) / d(settle) growth
};

/// Input-drift diagnostic over a recorded run: d(t) = |w1^2 - w2^2|, the
/// settle time of the tracking error, and whether d keeps growing after the
/// error has settled.
struct DriftReport {
  std::vector<double> t;
  std::vector<double> d;
  bool settled = false;             ///< false = no settle window found
  double settle_time = 0.0;         ///< valid when settled
  double post_settle_slope = 0.0;   ///< valid when settled
  double d_at_settle = 0.0;
  double d_at_end = 0.0;
  bool detected = false;
  std::optional<double> onset_time; ///< first post-settle crossing of the
                                    ///< growth threshold
};

DriftReport drift_metric(const std::vector<SimRecord>& records,
                         const DriftParams& params = {});

struct ChannelSaturation {
  int channel = 0;
  bool initially_saturated = false;
  std::optional<double> first_event_time;  ///< first SaturationOn event
  double total_duration = 0.0;
  double fraction_of_samples = 0.0;
  int event_count = 0;  ///< number of SaturationOn events
};

struct SaturationSummary {
  std::array<ChannelSaturation, 2> channels{};
  bool any() const {
    return channels[0].initially_saturated || channels[1].initially_saturated ||
           channels[0].event_count > 0 || channels[1].event_count > 0;
  }
};

/// Per-channel saturation bookkeeping: onset times and durations from the
/// event log, sample fractions from the record stream.
SaturationSummary detect_saturation(const EventLog& events,
                                    const std::vector<SimRecord>& records);

}  // namespace tiltsim
