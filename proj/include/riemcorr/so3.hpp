#pragma once

// SO(3) kernels: the R^3 <-> so(3) identification, matrix exp/log,
// quaternion and axis-angle conversions, polar projection.
//
// Convention for the skew identification, applied consistently everywhere:
//
//   skew(x, y, z) = |  0  x  y |
//                   | -x  0  z |
//                   | -y -z  0 |
//
// This differs from the common "hat" map by an axis permutation and sign:
// skew(x,y,z) = hat(-z, y, -x). All axis extraction below derives from the
// layout above; the two conventions are never mixed.
//
// The metric is the bi-invariant one with <X,Y> = tr(X Y^T) / 2 at every
// point, so |A| = |skew(A)|_F / sqrt(2) and geodesic distance equals the
// rotation angle.

#include <cmath>
#include <vector>

#include "riemcorr/errors.hpp"
#include "riemcorr/linalg.hpp"

namespace riemcorr::so3 {

constexpr double kCutGuard = 1e-8;

inline Mat3 skew(const Vec3& a) {
  Mat3 k;
  k(0, 1) = a.x;
  k(0, 2) = a.y;
  k(1, 2) = a.z;
  k(1, 0) = -a.x;
  k(2, 0) = -a.y;
  k(2, 1) = -a.z;
  return k;
}

inline Vec3 unskew(const Mat3& k) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(k(i, j) + k(j, i)));
  if (worst > 1e-10) throw std::invalid_argument("unskew: matrix is not skew-symmetric");
  return {k(0, 1), k(0, 2), k(1, 2)};
}

// exp(skew(a)) by the Rodrigues closed form; short power series below 1e-6
// where the sin/cos quotients lose accuracy.
inline Mat3 exp_map(const Vec3& a) {
  const double theta = norm(a);
  const Mat3 k = skew(a);
  const Mat3 k2 = k * k;
  double c1, c2;  // sin(t)/t and (1-cos(t))/t^2
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::identity() + c1 * k + c2 * k2;
}

inline double rotation_angle(const Mat3& r) {
  const Mat3 sk = (r - transpose(r)) * 0.5;
  const Vec3 sv{sk(0, 1), sk(0, 2), sk(1, 2)};
  const double c = (trace(r) - 1.0) * 0.5;
  return std::atan2(norm(sv), c);
}

// Inverse of exp_map. Branches: first-order below 1e-7; symmetric-part axis
// extraction within 1e-4 of pi, where the skew part is too small to scale
// reliably; Rodrigues inversion otherwise. Refuses angles past the cut guard.
inline Vec3 log_map(const Mat3& r) {
  const Mat3 sk = (r - transpose(r)) * 0.5;
  const Vec3 sv{sk(0, 1), sk(0, 2), sk(1, 2)};  // = sin(theta) * unit direction
  const double s = norm(sv);
  const double c = (trace(r) - 1.0) * 0.5;
  const double theta = std::atan2(s, c);
  if (theta > kPi - kCutGuard)
    throw CutLocusError("so3 log map: rotation angle at the cut-locus guard");
  if (theta < 1e-7) return sv;
  if (theta > kPi - 1e-4) {
    // (R + R^T)/2 = c I + (1-c) u u^T with u the hat-convention axis.
    const Mat3 sym = (r + transpose(r)) * 0.5;
    int imax = 0;
    for (int i = 1; i < 3; ++i)
      if (sym(i, i) > sym(imax, imax)) imax = i;
    Vec3 u{0, 0, 0};
    u[imax] = std::sqrt(std::max(0.0, (sym(imax, imax) - c) / (1.0 - c)));
    for (int j = 0; j < 3; ++j)
      if (j != imax) u[j] = sym(imax, j) / ((1.0 - c) * u[imax]);
    u = normalized(u);
    Vec3 dir{-u.z, u.y, -u.x};  // hat axis -> skew(x,y,z) coordinates
    if (dot(sv, dir) < 0.0) dir = -dir;
    return theta * dir;
  }
  return (theta / s) * sv;
}

inline double distance(const Mat3& r, const Mat3& q) { return rotation_angle(transpose(r) * q); }

// Bi-invariant metric on ambient tangent matrices; the same formula is valid
// at every base point.
inline double metric_inner(const Mat3& x, const Mat3& y) { return 0.5 * trace(x * transpose(y)); }

inline bool is_rotation(const Mat3& r, double tol) {
  return max_abs_diff(transpose(r) * r, Mat3::identity()) <= tol && std::abs(det(r) - 1.0) <= tol;
}

// Nearest rotation by Newton iteration on the orthogonal polar factor,
// X <- (X + X^-T)/2. Quadratic convergence for any invertible input with
// positive determinant.
inline Mat3 polar_project(const Mat3& m) {
  if (det(m) <= 0.0)
    throw std::invalid_argument("polar_project: determinant must be positive");
  Mat3 x = m;
  for (int it = 0; it < 30; ++it) {
    const Mat3 next = (x + transpose(inverse(x))) * 0.5;
    const double step = max_abs_diff(next, x);
    x = next;
    if (step < 1e-15) break;
  }
  return x;
}

struct Quaternion {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;  // scalar-first
  double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

// Unit quaternion to rotation matrix. Inputs off unit norm by more than 1e-6
// are rejected; smaller drift is renormalized.
inline Mat3 rotation_from_quaternion(Quaternion q) {
  const double n = q.norm();
  if (std::abs(n - 1.0) > 1e-6)
    throw std::invalid_argument("rotation_from_quaternion: quaternion is not unit length");
  q.a /= n;
  q.b /= n;
  q.c /= n;
  q.d /= n;
  const double a = q.a, b = q.b, c = q.c, d = q.d;
  Mat3 r;
  r(0, 0) = a * a + b * b - c * c - d * d;
  r(0, 1) = 2.0 * (b * c + a * d);
  r(0, 2) = 2.0 * (b * d - a * c);
  r(1, 0) = 2.0 * (b * c - a * d);
  r(1, 1) = a * a + c * c - b * b - d * d;
  r(1, 2) = 2.0 * (c * d + a * b);
  r(2, 0) = 2.0 * (b * d + a * c);
  r(2, 1) = 2.0 * (c * d - a * b);
  r(2, 2) = a * a + d * d - b * b - c * c;
  return r;
}

struct AxisAngle {
  Vec3 axis;
  double angle = 0.0;  // radians
};

inline Quaternion quaternion_from_axis_angle(const AxisAngle& aa) {
  const double n = norm(aa.axis);
  if (std::abs(n - 1.0) > 1e-6)
    throw std::invalid_argument("axis-angle: axis is not unit length");
  const Vec3 u = aa.axis / n;
  const double h = aa.angle * 0.5;
  return {std::cos(h), u.x * std::sin(h), u.y * std::sin(h), u.z * std::sin(h)};
}

inline Mat3 rotation_from_axis_angle(const AxisAngle& aa) {
  return rotation_from_quaternion(quaternion_from_axis_angle(aa));
}

// Left-translated identity frame at r: the images of the canonical axes
// under skew, normalized in the metric (unit already, since |e_k| = 1).
inline std::array<Mat3, 3> tangent_frame(const Mat3& r) {
  return {r * skew({1, 0, 0}), r * skew({0, 1, 0}), r * skew({0, 0, 1})};
}

}  // namespace riemcorr::so3
