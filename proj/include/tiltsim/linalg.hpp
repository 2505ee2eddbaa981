#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tiltsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Vec3 operator+(const Vec3& o) const { return {a + o.a, b + o.b, c + o.c}; }
  Vec3 operator*(double s) const { return {a * s, b * s, c * s}; }
  double dot(const Vec3& o) const { return a * o.a + b * o.b + c * o.c; }
  double norm() const { return std::sqrt(a * a + b * b + c * c); }
};

/// 2x2 matrix, row-major.
struct Mat2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;

  Vec2 operator*(const Vec2& v) const {
    return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
  }
  Mat2 operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  Mat2 operator*(double s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }
  Mat2 operator+(const Mat2& o) const {
    return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
  }
  double det() const { return m00 * m11 - m01 * m10; }
  double max_abs() const {
    return std::max(std::max(std::fabs(m00), std::fabs(m01)),
                    std::max(std::fabs(m10), std::fabs(m11)));
  }
  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// 2x3 matrix, row-major. Columns are addressed 0..2.
struct Mat2x3 {
  double m00 = 0.0, m01 = 0.0, m02 = 0.0;
  double m10 = 0.0, m11 = 0.0, m12 = 0.0;

  Vec2 operator*(const Vec3& v) const {
    return {m00 * v.a + m01 * v.b + m02 * v.c,
            m10 * v.a + m11 * v.b + m12 * v.c};
  }
  Vec2 col(int j) const {
    switch (j) {
      case 0: return {m00, m10};
      case 1: return {m01, m11};
      default: return {m02, m12};
    }
  }
};

/// 3x2 matrix, row-major.
struct Mat3x2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;
  double m20 = 0.0, m21 = 0.0;

  Vec3 operator*(const Vec2& v) const {
    return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y, m20 * v.x + m21 * v.y};
  }
};

inline Mat2 mul_2x3_3x2(const Mat2x3& a, const Mat3x2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10 + a.m02 * b.m20,
          a.m00 * b.m01 + a.m01 * b.m11 + a.m02 * b.m21,
          a.m10 * b.m00 + a.m11 * b.m10 + a.m12 * b.m20,
          a.m10 * b.m01 + a.m11 * b.m11 + a.m12 * b.m21};
}

/// Gram matrix d * d^T of a 2x3 matrix.
inline Mat2 gram(const Mat2x3& d) {
  return {d.m00 * d.m00 + d.m01 * d.m01 + d.m02 * d.m02,
          d.m00 * d.m10 + d.m01 * d.m11 + d.m02 * d.m12,
          d.m10 * d.m00 + d.m11 * d.m01 + d.m12 * d.m02,
          d.m10 * d.m10 + d.m11 * d.m11 + d.m12 * d.m12};
}

struct SingularMatrix : std::runtime_error {
  double det;
  explicit SingularMatrix(double d)
      : std::runtime_error("singular 2x2 matrix, det = " + std::to_string(d)),
        det(d) {}
};

struct RankDeficient : std::runtime_error {
  double gram_det;
  explicit RankDeficient(double d)
      : std::runtime_error("rank-deficient 2x3 matrix, det(d*d^T) = " +
                           std::to_string(d)),
        gram_det(d) {}
};

/// Scale-aware singularity threshold. An absolute epsilon would flag
/// well-conditioned matrices with large entries (the decoupling matrices
/// carry omega^2 ~ 1e5).
inline double singularity_threshold(const Mat2& m) {
  const double n = m.max_abs();
  return 1e-12 * (1.0 + n * n);
}

/// Planar rotation by `angle`.
Mat2 rotation(double angle);

/// Entrywise derivative of rotation() with respect to the angle.
Mat2 rotation_derivative(double angle);

/// Inverse of a 2x2 matrix. Throws SingularMatrix when |det| is below the
/// scale-aware threshold.
Mat2 mat2_inverse(const Mat2& m);

/// Right Moore-Penrose pseudo-inverse d^T * (d * d^T)^{-1} of a full-row-rank
/// 2x3 matrix. Throws RankDeficient when the Gram determinant is below the
/// scale-aware threshold (either propeller speed at zero).
Mat3x2 pinv_2x3(const Mat2x3& d);

}  // namespace tiltsim
