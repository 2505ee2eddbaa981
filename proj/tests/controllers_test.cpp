#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tiltsim/controllers.hpp"

using namespace tiltsim;

namespace {

// Independent least-norm solve of a 2x3 system via the row-space ansatz
// u = d^T y with (d d^T) y = v, eliminated by Cramer's rule.
Vec3 least_norm_oracle(const Mat2x3& d, const Vec2& v) {
  const Mat2 g = gram(d);
  const double det = g.det();
  const double y1 = (v.x * g.m11 - v.y * g.m01) / det;
  const double y2 = (g.m00 * v.y - g.m10 * v.x) / det;
  return {d.m00 * y1 + d.m10 * y2, d.m01 * y1 + d.m11 * y2,
          d.m02 * y1 + d.m12 * y2};
}

SimState on_track_state(double w1, double w2, double alpha) {
  SimState s;
  s.omega1 = w1;
  s.omega2 = w2;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("gains validation") {
  CHECK_NOTHROW(Gains({6, 12, 8}, {6, 12, 8}));
  CHECK_THROWS_AS(Gains({-1, 2, 1}, {-1, 2, 1}), std::invalid_argument);
  // Positive but not Hurwitz: k1 k2 <= k3.
  CHECK_THROWS_AS(Gains({1, 1, 2}, {1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Gains({1, 2}, {1, 2, 3}), std::invalid_argument);

  const Gains fl3 = Gains::from_pole(3, -2.0);
  CHECK(fl3.kx()[0] == doctest::Approx(6.0));
  CHECK(fl3.kx()[1] == doctest::Approx(12.0));
  CHECK(fl3.kx()[2] == doctest::Approx(8.0));
  const Gains pd = Gains::from_pole(2, -2.0);
  CHECK(pd.kx()[0] == doctest::Approx(4.0));
  CHECK(pd.kx()[1] == doctest::Approx(4.0));
  const Gains fl4 = Gains::from_pole(4, -2.0);
  CHECK(fl4.kx()[0] == doctest::Approx(8.0));
  CHECK(fl4.kx()[1] == doctest::Approx(24.0));
  CHECK(fl4.kx()[2] == doctest::Approx(32.0));
  CHECK(fl4.kx()[3] == doctest::Approx(16.0));
}

TEST_CASE("fl3 zero virtual input gives zero command") {
  const VehicleParams p;
  const Gains g = Gains::from_pole(3, -2.0);
  const SimState s = on_track_state(180.0, 180.0, 0.0);

  // Straight-line reference matched to the state: all errors and the
  // reference jerk vanish.
  ReferenceSample ref;
  ref.pos = s.pos();
  ref.vel = s.vel();
  ref.acc = body_accel(s, p);
  ref.jerk = {0.0, 0.0};

  const ControlCommand cmd = fl3_control(s, ref, g, p);
  CHECK(std::fabs(cmd.values[0]) < 1e-12);
  CHECK(std::fabs(cmd.values[1]) < 1e-12);
  CHECK(std::fabs(cmd.values[2]) < 1e-12);
  CHECK_FALSE(cmd.singular);
}

TEST_CASE("fl3 command reproduces the virtual input") {
  const VehicleParams p;
  const Gains g = Gains::from_pole(3, -2.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(20.0, 280.0);
  std::uniform_real_distribution<double> al(-4.0, 4.0);
  std::uniform_real_distribution<double> x(-20.0, 20.0);

  for (int i = 0; i < 1000; ++i) {
    SimState s = on_track_state(w(rng), w(rng), al(rng));
    s.x = x(rng);
    s.y = x(rng);
    s.vx = x(rng) * 0.1;
    s.vy = x(rng) * 0.1;
    ReferenceSample ref;
    ref.pos = {x(rng), x(rng)};
    ref.vel = {x(rng) * 0.2, x(rng) * 0.2};
    ref.acc = {x(rng) * 0.3, x(rng) * 0.3};
    ref.jerk = {x(rng), x(rng)};

    const Vec2 acc = body_accel(s, p);
    const Vec2 v{ref.jerk.x + 6.0 * (ref.acc.x - acc.x) +
                     12.0 * (ref.vel.x - s.vx) + 8.0 * (ref.pos.x - s.x),
                 ref.jerk.y + 6.0 * (ref.acc.y - acc.y) +
                     12.0 * (ref.vel.y - s.vy) + 8.0 * (ref.pos.y - s.y)};

    const ControlCommand cmd = fl3_control(s, ref, g, p);
    const Vec3 u{cmd.values[0], cmd.values[1], cmd.values[2]};
    const AccelDecomposition d = jerk_decomposition(s, p);
    CHECK((d.gain * u - v).norm() < 1e-9 * (1.0 + v.norm()));

    // Minimum-norm allocation: no null-space component.
    const Vec3 r1{d.gain.m00, d.gain.m01, d.gain.m02};
    const Vec3 r2{d.gain.m10, d.gain.m11, d.gain.m12};
    Vec3 null_dir{r1.b * r2.c - r1.c * r2.b, r1.c * r2.a - r1.a * r2.c,
                  r1.a * r2.b - r1.b * r2.a};
    const double nn = null_dir.norm();
    if (nn > 1e-9) {
      CHECK(std::fabs(u.dot(null_dir)) / nn < 1e-9 * (1.0 + u.norm()));
    }
  }
}

TEST_CASE("fl3 minimum-norm solution matches the independent oracle") {
  const VehicleParams p;
  const Gains g({1.0, 1.0, 0.5}, {1.0, 1.0, 0.5});
  SimState s = on_track_state(200.0, 200.0, 0.0);

  // Choose a reference whose only mismatch is a unit of jerk demand in y,
  // reproducing the worked 2x3 least-norm solve.
  ReferenceSample ref;
  ref.pos = s.pos();
  ref.vel = s.vel();
  ref.acc = body_accel(s, p);
  ref.jerk = {0.0, 1.0};

  const ControlCommand cmd = fl3_control(s, ref, g, p);
  const Vec3 expected =
      least_norm_oracle(jerk_decomposition(s, p).gain, {0.0, 1.0});
  CHECK(cmd.values[0] == doctest::Approx(expected.a).epsilon(1e-9));
  CHECK(cmd.values[1] == doctest::Approx(expected.b).epsilon(1e-9));
  CHECK(cmd.values[2] == doctest::Approx(expected.c).epsilon(1e-9));
  // Frozen values for the paper state: symmetric speed rates, tilt does the rest.
  CHECK(cmd.values[0] == doctest::Approx(0.00016666).epsilon(1e-3));
  CHECK(cmd.values[1] == doctest::Approx(-0.00016666).epsilon(1e-3));
  CHECK(cmd.values[2] == doctest::Approx(0.02886559).epsilon(1e-6));
}

TEST_CASE("fl3 singularity floor engages near zero speed") {
  const VehicleParams p;
  const Gains g = Gains::from_pole(3, -2.0);
  SimState s = on_track_state(0.0, 200.0, 0.0);
  ReferenceSample ref;
  ref.acc = {1.0, 0.0};
  const ControlCommand cmd = fl3_control(s, ref, g, p);
  CHECK(cmd.singular);

  // Both speeds at zero: no invertible channel remains.
  SimState dead = on_track_state(0.0, 0.0, 0.0);
  CHECK_THROWS_AS(fl3_control(dead, ref, g, p), RankDeficient);
}

TEST_CASE("gait schedule") {
  const VehicleParams p;
  const CircleSpec spec;

  CHECK(gait_alpha(1.0, p, spec, true) == doctest::Approx(2.0));
  CHECK(gait_alpha(0.0, p, spec) == doctest::Approx(M_PI));

  // psi + alpha tracks the center ray of the reference.
  for (double t : {0.0, 0.7, 2.0, 5.5, 9.9}) {
    const double a = gait_alpha(t, p, spec);
    const double mid = psi_from_alpha(a, p) + a;
    CHECK(std::fabs(mid - (M_PI / 2.0 + t)) < 1e-12);
  }

  VehicleParams degenerate;
  degenerate.i_b = degenerate.i_t;
  CHECK_THROWS_AS(gait_alpha(1.0, degenerate, spec), DegenerateInertia);
}

TEST_CASE("gait control worked example") {
  const VehicleParams p;
  CircleSpec spec;
  const Gains g = Gains::from_pole(2, -2.0);

  // Place the vehicle so the demand is purely (0, 10) with the band mid at
  // pi/2: the inverse splits it symmetrically.
  SimState s;
  s.vx = 10.0;  // cancels the velocity error at t = 0 except acc feedforward
  ReferenceSample ref = circle_sample(spec, 0.0);
  s.x = ref.pos.x;
  s.y = ref.pos.y;
  s.vy = ref.vel.y;

  const ControlCommand cmd = gait_control(s, ref, g, p, spec, 0.0);
  CHECK(cmd.values[0] == doctest::Approx(5773.503).epsilon(1e-6));
  CHECK(cmd.values[1] == doctest::Approx(5773.503).epsilon(1e-6));
  CHECK(cmd.values[2] == doctest::Approx(M_PI));
  CHECK_FALSE(cmd.saturated[0]);
  CHECK_FALSE(cmd.saturated[1]);
}

TEST_CASE("gait control clamps and flags") {
  const VehicleParams p;
  const CircleSpec spec;
  const Gains g = Gains::from_pole(2, -2.0);

  // Zero demand: both squared speeds zero, no saturation flags.
  SimState s;
  ReferenceSample ref;  // all zero
  ControlCommand cmd = gait_control(s, ref, g, p, spec, 0.0);
  CHECK(cmd.values[0] == 0.0);
  CHECK(cmd.values[1] == 0.0);
  CHECK_FALSE(cmd.saturated[0]);
  CHECK_FALSE(cmd.saturated[1]);

  // A demand orthogonal to the band mid exceeds what nonnegative thrust can
  // produce laterally: one channel clamps at zero.
  ref.acc = {10.0, 0.0};  // band mid points to +y at t = 0
  cmd = gait_control(s, ref, g, p, spec, 0.0);
  CHECK((cmd.saturated[0] || cmd.saturated[1]));
  CHECK(cmd.values[0] >= 0.0);
  CHECK(cmd.values[1] >= 0.0);

  // Upper clamp.
  ControlOptions opts;
  opts.omega_sq_max = 100.0;
  ref.acc = {0.0, 10.0};
  cmd = gait_control(s, ref, g, p, spec, 0.0, opts);
  CHECK(cmd.saturated[0]);
  CHECK(cmd.values[0] == 100.0);
}

TEST_CASE("gait symmetry: aligned demand splits evenly") {
  const VehicleParams p;
  const CircleSpec spec;
  const Gains g = Gains::from_pole(2, -2.0);
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> t_dist(0.0, 12.0);
  std::uniform_real_distribution<double> mag(0.1, 30.0);

  for (int i = 0; i < 1000; ++i) {
    const double t = t_dist(rng);
    const double a = gait_alpha(t, p, spec);
    const double mid = psi_from_alpha(a, p) + a;
    SimState s;
    ReferenceSample ref;
    ref.acc = Vec2{std::cos(mid), std::sin(mid)} * mag(rng);
    const ControlCommand cmd = gait_control(s, ref, g, p, spec, t);
    CHECK(cmd.values[0] ==
          doctest::Approx(cmd.values[1]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("fl4 zero virtual input gives zero command") {
  const VehicleParams p;
  const Gains g = Gains::from_pole(4, -2.0);
  SimState s = on_track_state(150.0, 150.0, 0.2);
  s.extended = true;  // zero rates: bias term vanishes

  ReferenceSample ref;
  ref.pos = s.pos();
  ref.vel = s.vel();
  ref.acc = body_accel(s, p);
  ref.jerk = {0.0, 0.0};
  ref.snap = {0.0, 0.0};

  const ControlCommand cmd = fl4_control(s, ref, g, p);
  CHECK(std::fabs(cmd.values[0]) < 1e-12);
  CHECK(std::fabs(cmd.values[1]) < 1e-12);
  CHECK(std::fabs(cmd.values[2]) < 1e-12);
}

TEST_CASE("fl4 command reproduces the virtual input") {
  const VehicleParams p;
  const Gains g = Gains::from_pole(4, -2.0);
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> w(20.0, 280.0);
  std::uniform_real_distribution<double> small(-3.0, 3.0);

  for (int i = 0; i < 1000; ++i) {
    SimState s = on_track_state(w(rng), w(rng), small(rng));
    s.extended = true;
    s.domega1 = small(rng) * 10.0;
    s.domega2 = small(rng) * 10.0;
    s.dalpha = small(rng) * 0.3;
    s.vx = small(rng);
    s.vy = small(rng);

    ReferenceSample ref;
    ref.pos = {small(rng), small(rng)};
    ref.vel = {small(rng), small(rng)};
    ref.acc = {small(rng), small(rng)};
    ref.jerk = {small(rng), small(rng)};
    ref.snap = {small(rng), small(rng)};

    const ControlCommand cmd = fl4_control(s, ref, g, p);
    const Vec3 u{cmd.values[0], cmd.values[1], cmd.values[2]};

    const Vec2 acc = body_accel(s, p);
    const Vec2 jerk =
        jerk_decomposition(s, p).gain * Vec3{s.domega1, s.domega2, s.dalpha};
    const Vec2 v{ref.snap.x + 8.0 * (ref.jerk.x - jerk.x) +
                     24.0 * (ref.acc.x - acc.x) + 32.0 * (ref.vel.x - s.vx) +
                     16.0 * (ref.pos.x - s.x),
                 ref.snap.y + 8.0 * (ref.jerk.y - jerk.y) +
                     24.0 * (ref.acc.y - acc.y) + 32.0 * (ref.vel.y - s.vy) +
                     16.0 * (ref.pos.y - s.y)};

    const AccelDecomposition d = snap_decomposition(s, p);
    CHECK((d.bias + d.gain * u - v).norm() < 1e-9 * (1.0 + v.norm()));
  }
}
