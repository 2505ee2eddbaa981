#include "tiltsim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tiltsim {

bool is_hurwitz(const std::vector<double>& k) {
  for (double v : k) {
    if (!(v > 0.0)) return false;
  }
  switch (k.size()) {
    case 1:
    case 2:
      return true;
    case 3:
      return k[0] * k[1] > k[2];
    case 4:
      return k[0] * k[1] > k[2] &&
             k[2] * (k[0] * k[1] - k[2]) > k[0] * k[0] * k[3];
    default:
      return false;
  }
}

Gains::Gains(std::vector<double> kx, std::vector<double> ky)
    : kx_(std::move(kx)), ky_(std::move(ky)) {
  if (kx_.size() != ky_.size() || kx_.empty() || kx_.size() > 4) {
    throw std::invalid_argument("gain vectors must share a length in 1..4");
  }
  if (!is_hurwitz(kx_) || !is_hurwitz(ky_)) {
    throw std::invalid_argument("gains do not yield a Hurwitz error polynomial");
  }
}

Gains Gains::from_pole(int order, double pole) {
  if (!(pole < 0.0)) throw std::invalid_argument("pole must be negative");
  // (s - pole)^order: binomial coefficients times powers of -pole.
  std::vector<double> k;
  double binom = 1.0;
  double power = 1.0;
  for (int i = 1; i <= order; ++i) {
    binom = binom * (order - i + 1) / i;
    power *= -pole;
    k.push_back(binom * power);
  }
  return Gains(k, k);
}

namespace {

SimState floored(const SimState& s, double floor, bool* engaged) {
  SimState f = s;
  *engaged = false;
  if (f.omega1 < floor) {
    f.omega1 = floor;
    *engaged = true;
  }
  if (f.omega2 < floor) {
    f.omega2 = floor;
    *engaged = true;
  }
  return f;
}

}  // namespace

ControlCommand fl3_control(const SimState& s, const ReferenceSample& ref,
                           const Gains& g, const VehicleParams& p,
                           const ControlOptions& opts) {
  const Vec2 acc = body_accel(s, p);
  const std::vector<double>& kx = g.kx();
  const std::vector<double>& ky = g.ky();
  const Vec2 v{ref.jerk.x + kx[0] * (ref.acc.x - acc.x) +
                   kx[1] * (ref.vel.x - s.vx) + kx[2] * (ref.pos.x - s.x),
               ref.jerk.y + ky[0] * (ref.acc.y - acc.y) +
                   ky[1] * (ref.vel.y - s.vy) + ky[2] * (ref.pos.y - s.y)};

  ControlCommand cmd;
  cmd.kind = ControllerKind::FL3;
  const SimState sf = floored(s, opts.omega_floor, &cmd.singular);
  const Vec3 u = pinv_2x3(jerk_decomposition(sf, p).gain) * v;
  cmd.values = {u.a, u.b, u.c};
  return cmd;
}

double gait_alpha(double t, const VehicleParams& p, const CircleSpec& spec,
                  bool raw) {
  const double ratio = p.inertia_ratio();
  if (std::fabs(1.0 - ratio) < 1e-9) throw DegenerateInertia();
  if (raw) return t / (1.0 - ratio);
  const double phi0 = center_direction(spec.start, spec);
  return (phi0 + spec.angular_rate() * t) / (1.0 - ratio);
}

ControlCommand gait_control(const SimState& s, const ReferenceSample& ref,
                            const Gains& g, const VehicleParams& p,
                            const CircleSpec& spec, double t,
                            const ControlOptions& opts) {
  const double alpha = gait_alpha(t, p, spec, opts.raw_gait_schedule);
  const double phi = (1.0 - p.inertia_ratio()) * alpha;
  const std::vector<double>& kx = g.kx();
  const std::vector<double>& ky = g.ky();
  const Vec2 b{ref.acc.x + kx[0] * (ref.vel.x - s.vx) +
                   kx[1] * (ref.pos.x - s.x),
               ref.acc.y + ky[0] * (ref.vel.y - s.vy) +
                   ky[1] * (ref.pos.y - s.y)};

  const Vec2 w_sq = mat2_inverse(rotation(phi) * j_theta(p)) * b * p.mass;

  ControlCommand cmd;
  cmd.kind = ControllerKind::Gait;
  cmd.values[2] = alpha;
  const double lo = 0.0;
  const double hi = opts.omega_sq_max;
  cmd.saturated[0] = w_sq.x < lo || w_sq.x > hi;
  cmd.saturated[1] = w_sq.y < lo || w_sq.y > hi;
  cmd.values[0] = std::clamp(w_sq.x, lo, hi);
  cmd.values[1] = std::clamp(w_sq.y, lo, hi);
  return cmd;
}

ControlCommand fl4_control(const SimState& s, const ReferenceSample& ref,
                           const Gains& g, const VehicleParams& p,
                           const ControlOptions& opts) {
  const Vec2 acc = body_accel(s, p);

  ControlCommand cmd;
  cmd.kind = ControllerKind::FL4;
  const SimState sf = floored(s, opts.omega_floor, &cmd.singular);
  const Vec2 jerk =
      jerk_decomposition(s, p).gain * Vec3{s.domega1, s.domega2, s.dalpha};

  const std::vector<double>& kx = g.kx();
  const std::vector<double>& ky = g.ky();
  const Vec2 v{ref.snap.x + kx[0] * (ref.jerk.x - jerk.x) +
                   kx[1] * (ref.acc.x - acc.x) + kx[2] * (ref.vel.x - s.vx) +
                   kx[3] * (ref.pos.x - s.x),
               ref.snap.y + ky[0] * (ref.jerk.y - jerk.y) +
                   ky[1] * (ref.acc.y - acc.y) + ky[2] * (ref.vel.y - s.vy) +
                   ky[3] * (ref.pos.y - s.y)};

  const AccelDecomposition d = snap_decomposition(sf, p, opts.eq27_verbatim);
  const Vec3 u = pinv_2x3(d.gain) * (v - d.bias);
  cmd.values = {u.a, u.b, u.c};
  return cmd;
}

}  // namespace tiltsim
