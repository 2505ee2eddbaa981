#include "tiltsim/linalg.hpp"

namespace tiltsim {

Mat2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

Mat2 rotation_derivative(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {-s, -c, c, -s};
}

Mat2 mat2_inverse(const Mat2& m) {
  const double d = m.det();
  if (std::fabs(d) <= singularity_threshold(m)) {
    throw SingularMatrix(d);
  }
  const double inv = 1.0 / d;
  return {m.m11 * inv, -m.m01 * inv, -m.m10 * inv, m.m00 * inv};
}

Mat3x2 pinv_2x3(const Mat2x3& d) {
  const Mat2 g = gram(d);
  const double gd = g.det();
  if (gd <= singularity_threshold(g)) {
    throw RankDeficient(gd);
  }
  const double inv = 1.0 / gd;
  const Mat2 gi{g.m11 * inv, -g.m01 * inv, -g.m10 * inv, g.m00 * inv};
  // d^T * gi
  return {d.m00 * gi.m00 + d.m10 * gi.m10, d.m00 * gi.m01 + d.m10 * gi.m11,
          d.m01 * gi.m00 + d.m11 * gi.m10, d.m01 * gi.m01 + d.m11 * gi.m11,
          d.m02 * gi.m00 + d.m12 * gi.m10, d.m02 * gi.m01 + d.m12 * gi.m11};
}

}  // namespace tiltsim
