#pragma once

// Points and tangent vectors on the two supported manifolds, with their
// validity invariants enforced at construction.

#include <array>
#include <cmath>
#include <string>

#include "riemcorr/errors.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/so3.hpp"
#include "riemcorr/sphere.hpp"

namespace riemcorr {

enum class Manifold { sphere, so3 };

inline const char* manifold_name(Manifold m) { return m == Manifold::sphere ? "sphere" : "so3"; }

inline Manifold manifold_from_name(const std::string& s) {
  if (s == "sphere") return Manifold::sphere;
  if (s == "so3") return Manifold::so3;
  throw std::invalid_argument("unknown manifold: " + s);
}

struct ManifoldConstants {
  double injectivity_radius;
  double convexity_radius;
};

inline ManifoldConstants constants(Manifold) {
  // Both S^2 and SO(3) (bi-invariant metric, distance = rotation angle):
  // injectivity radius pi, convexity radius pi/2.
  return {kPi, kPi / 2.0};
}

class ManifoldPoint {
 public:
  // Strict constructors: the caller asserts the invariant already holds.
  static ManifoldPoint on_sphere(const Vec3& v) {
    if (std::abs(norm(v) - 1.0) > 1e-12)
      throw std::invalid_argument("sphere point: not a unit vector (|norm - 1| > 1e-12)");
    return ManifoldPoint(v);
  }
  static ManifoldPoint rotation(const Mat3& r) {
    if (max_abs_diff(transpose(r) * r, Mat3::identity()) > 1e-10)
      throw std::invalid_argument("rotation point: R^T R deviates from I by more than 1e-10");
    if (std::abs(det(r) - 1.0) > 1e-10)
      throw std::invalid_argument("rotation point: det deviates from +1 by more than 1e-10");
    return ManifoldPoint(r);
  }

  // Projecting constructors, for inputs carrying floating-point drift.
  static ManifoldPoint sphere_normalized(const Vec3& v) { return ManifoldPoint(normalized(v)); }
  static ManifoldPoint rotation_projected(const Mat3& r) {
    return ManifoldPoint(so3::polar_project(r));
  }

  Manifold manifold() const { return tag_; }

  const Vec3& unit_vector() const {
    if (tag_ != Manifold::sphere) throw std::logic_error("unit_vector() on a non-sphere point");
    return v_;
  }
  const Mat3& rotation_matrix() const {
    if (tag_ != Manifold::so3) throw std::logic_error("rotation_matrix() on a non-rotation point");
    return r_;
  }

  // Exact representation equality (used for tangent base checks).
  bool operator==(const ManifoldPoint& o) const {
    if (tag_ != o.tag_) return false;
    return tag_ == Manifold::sphere ? v_ == o.v_ : r_ == o.r_;
  }
  bool operator!=(const ManifoldPoint& o) const { return !(*this == o); }

 private:
  explicit ManifoldPoint(const Vec3& v) : tag_(Manifold::sphere), v_(v) {}
  explicit ManifoldPoint(const Mat3& r) : tag_(Manifold::so3), r_(r) {}

  Manifold tag_;
  Vec3 v_{0.0, 0.0, 1.0};
  Mat3 r_ = Mat3::identity();
};

// Tangent vector at a base point, stored as coordinates in the deterministic
// orthonormal frame of the base (2 coordinates on the sphere, 3 on SO(3)).
// The coordinate norm equals the Riemannian norm.
class TangentVector {
 public:
  TangentVector(const ManifoldPoint& base, const std::array<double, 3>& coords)
      : base_(base), coords_(coords) {
    if (dim() == 2) coords_[2] = 0.0;
  }

  static TangentVector zero(const ManifoldPoint& base) { return {base, {0.0, 0.0, 0.0}}; }

  const ManifoldPoint& base() const { return base_; }
  int dim() const { return base_.manifold() == Manifold::sphere ? 2 : 3; }
  const std::array<double, 3>& coords() const { return coords_; }
  double coord(int i) const { return coords_[i]; }

  double norm() const {
    return std::sqrt(coords_[0] * coords_[0] + coords_[1] * coords_[1] +
                     coords_[2] * coords_[2]);
  }

  TangentVector scaled(double s) const {
    return {base_, {coords_[0] * s, coords_[1] * s, coords_[2] * s}};
  }
  TangentVector operator-() const { return scaled(-1.0); }

 private:
  ManifoldPoint base_;
  std::array<double, 3> coords_;
};

}  // namespace riemcorr
