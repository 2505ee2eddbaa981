#pragma once

#include <stdexcept>

#include "tiltsim/linalg.hpp"

namespace tiltsim {

/// Position and its time derivatives up to fourth order at one instant.
struct ReferenceSample {
  Vec2 pos{};
  Vec2 vel{};
  Vec2 acc{};
  Vec2 jerk{};
  Vec2 snap{};
};

/// Constant-speed circular trajectory. The default matches the tracking
/// experiments: radius 10, speed 10, start at the origin, center at (0, 10),
/// counter-clockwise.
struct CircleSpec {
  double radius = 10.0;
  double speed = 10.0;
  Vec2 start{0.0, 0.0};
  Vec2 center{0.0, 10.0};
  bool ccw = true;

  double angular_rate() const { return (ccw ? 1.0 : -1.0) * speed / radius; }

  void validate() const;
};

struct AtCenter : std::domain_error {
  AtCenter() : std::domain_error("position coincides with the circle center") {}
};

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Analytic sample of the circular reference at time t.
ReferenceSample circle_sample(const CircleSpec& spec, double t);

/// Angle of the ray from `pos` to the circle center, in (-pi, pi].
/// Throws AtCenter when `pos` is within 1e-9 of the center.
double center_direction(const Vec2& pos, const CircleSpec& spec);

}  // namespace tiltsim
