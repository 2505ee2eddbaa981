#include "tiltsim/reference.hpp"

#include <cmath>

namespace tiltsim {

void CircleSpec::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!(speed > 0.0)) throw std::invalid_argument("speed must be positive");
  const double off = std::fabs((start - center).norm() - radius);
  if (off > 1e-9 * (1.0 + radius)) {
    throw std::invalid_argument("start point must lie on the circle");
  }
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

ReferenceSample circle_sample(const CircleSpec& spec, double t) {
  // pos(t) = center + R(w t) (start - center); each derivative advances the
  // rotation phase by pi/2 and multiplies by w.
  const double w = spec.angular_rate();
  const Vec2 arm = spec.start - spec.center;
  const double ph = w * t;

  ReferenceSample s;
  s.pos = spec.center + rotation(ph) * arm;
  s.vel = rotation(ph + M_PI / 2.0) * arm * w;
  s.acc = rotation(ph + M_PI) * arm * (w * w);
  s.jerk = rotation(ph + 1.5 * M_PI) * arm * (w * w * w);
  s.snap = rotation(ph) * arm * (w * w * w * w);
  return s;
}

double center_direction(const Vec2& pos, const CircleSpec& spec) {
  const Vec2 d = spec.center - pos;
  if (d.norm() < 1e-9) throw AtCenter();
  return std::atan2(d.y, d.x);
}

}  // namespace tiltsim
