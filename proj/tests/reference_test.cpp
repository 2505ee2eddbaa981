#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tiltsim/reference.hpp"

using namespace tiltsim;

TEST_CASE("default circle at t = 0") {
  const CircleSpec spec;
  const ReferenceSample s = circle_sample(spec, 0.0);
  CHECK(s.pos.x == doctest::Approx(0.0).scale(1));
  CHECK(s.pos.y == doctest::Approx(0.0).scale(1));
  CHECK(s.vel.x == doctest::Approx(10.0));
  CHECK(std::fabs(s.vel.y) < 1e-12);
  CHECK(std::fabs(s.acc.x) < 1e-12);
  CHECK(s.acc.y == doctest::Approx(10.0));
  CHECK(s.jerk.x == doctest::Approx(-10.0));
  CHECK(std::fabs(s.jerk.y) < 1e-12);
  CHECK(std::fabs(s.snap.x) < 1e-12);
  CHECK(s.snap.y == doctest::Approx(-10.0));
}

TEST_CASE("periodicity and circle membership") {
  const CircleSpec spec;
  const double period = 2.0 * M_PI * spec.radius / spec.speed;
  const ReferenceSample wrap = circle_sample(spec, period);
  CHECK((wrap.pos - spec.start).norm() < 1e-9);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const ReferenceSample s = circle_sample(spec, time(rng));
    CHECK(std::fabs((s.pos - spec.center).norm() - spec.radius) < 1e-12);
    CHECK(s.vel.norm() == doctest::Approx(spec.speed).epsilon(1e-12));
  }
}

TEST_CASE("derivatives are consistent with finite differences") {
  const CircleSpec spec;
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> time(0.1, 50.0);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double t = time(rng);
    const ReferenceSample m = circle_sample(spec, t - h);
    const ReferenceSample c = circle_sample(spec, t);
    const ReferenceSample p = circle_sample(spec, t + h);

    const Vec2 vel_fd = (p.pos - m.pos) * (1.0 / (2.0 * h));
    const Vec2 acc_fd = (p.vel - m.vel) * (1.0 / (2.0 * h));
    const Vec2 jerk_fd = (p.acc - m.acc) * (1.0 / (2.0 * h));
    const Vec2 snap_fd = (p.jerk - m.jerk) * (1.0 / (2.0 * h));
    CHECK((c.vel - vel_fd).norm() / c.vel.norm() < 1e-6);
    CHECK((c.acc - acc_fd).norm() / c.acc.norm() < 1e-6);
    CHECK((c.jerk - jerk_fd).norm() / c.jerk.norm() < 1e-6);
    CHECK((c.snap - snap_fd).norm() / c.snap.norm() < 1e-6);
  }
}

TEST_CASE("clockwise and custom geometry") {
  CircleSpec spec;
  spec.center = {10.0, 0.0};
  spec.ccw = false;
  spec.validate();
  // The start sits at the west point; clockwise motion heads up from there.
  const ReferenceSample s = circle_sample(spec, 0.0);
  CHECK(s.vel.y == doctest::Approx(10.0));

  spec.start = {3.0, 0.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("center direction") {
  const CircleSpec spec;  // center (0, 10)
  CHECK(center_direction({0.0, 0.0}, spec) == doctest::Approx(M_PI / 2.0));
  CHECK(center_direction({0.0, 20.0}, spec) == doctest::Approx(-M_PI / 2.0));
  CHECK_THROWS_AS(center_direction({0.0, 10.0 + 1e-12}, spec), AtCenter);

  // On-circle positions: the center ray leads the parameter by pi/2.
  for (double t : {0.1, 0.9, 2.2, 4.4, 6.0}) {
    const ReferenceSample s = circle_sample(spec, t);
    const double expected = wrap_angle(M_PI / 2.0 + t);
    CHECK(std::fabs(wrap_angle(center_direction(s.pos, spec) - expected)) <
          1e-9);
  }
}

TEST_CASE("angle wrapping convention") {
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
  CHECK(wrap_angle(2.0 * M_PI + 0.5) == doctest::Approx(0.5));
}
