#pragma once

// Manifold-generic geometry operations: exponential and logarithm maps,
// geodesic distance, geodesic interpolation, tangent frames. These dispatch
// to the sphere and SO(3) kernels and convert between frame coordinates and
// ambient representations.

#include <array>
#include <stdexcept>
#include <utility>

#include "riemcorr/manifold.hpp"

namespace riemcorr {

// Orthonormal tangent frame at a point, in ambient representation.
// Sphere: two 3-vectors orthogonal to the point. SO(3): the left-translated
// skew axes R*skew(e_k), orthonormal under <X,Y> = tr(X Y^T)/2.
struct TangentBasis {
  Manifold manifold;
  int dim;
  std::array<Vec3, 2> sphere_axes{};
  std::array<Mat3, 3> rotation_axes{};
};

inline TangentBasis tangent_basis(const ManifoldPoint& p) {
  TangentBasis b{p.manifold(), p.manifold() == Manifold::sphere ? 2 : 3, {}, {}};
  if (p.manifold() == Manifold::sphere) {
    const auto [e1, e2] = sphere::tangent_frame(p.unit_vector());
    b.sphere_axes = {e1, e2};
  } else {
    b.rotation_axes = so3::tangent_frame(p.rotation_matrix());
  }
  return b;
}

// Frame coordinates of an ambient sphere tangent vector (and back).
inline std::array<double, 3> sphere_coords_from_ambient(const ManifoldPoint& p, const Vec3& w) {
  const auto [e1, e2] = sphere::tangent_frame(p.unit_vector());
  return {dot(e1, w), dot(e2, w), 0.0};
}

inline Vec3 sphere_ambient_from_coords(const ManifoldPoint& p, const std::array<double, 3>& c) {
  const auto [e1, e2] = sphere::tangent_frame(p.unit_vector());
  return c[0] * e1 + c[1] * e2;
}

inline TangentVector tangent_from_sphere_ambient(const ManifoldPoint& p, const Vec3& w) {
  return {p, sphere_coords_from_ambient(p, w)};
}

inline double distance(const ManifoldPoint& p, const ManifoldPoint& q) {
  if (p.manifold() != q.manifold())
    throw std::invalid_argument("distance: points on different manifolds");
  return p.manifold() == Manifold::sphere
             ? sphere::distance(p.unit_vector(), q.unit_vector())
             : so3::distance(p.rotation_matrix(), q.rotation_matrix());
}

inline ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& v) {
  if (v.base() != p) throw BaseMismatchError("exp_map: tangent vector based at another point");
  if (p.manifold() == Manifold::sphere) {
    const Vec3 w = sphere_ambient_from_coords(p, v.coords());
    return ManifoldPoint::sphere_normalized(sphere::exp_map(p.unit_vector(), w));
  }
  const Vec3 a{v.coord(0), v.coord(1), v.coord(2)};
  return ManifoldPoint::rotation_projected(p.rotation_matrix() * so3::exp_map(a));
}

inline TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q) {
  if (p.manifold() != q.manifold())
    throw std::invalid_argument("log_map: points on different manifolds");
  if (p.manifold() == Manifold::sphere) {
    const Vec3 w = sphere::log_map(p.unit_vector(), q.unit_vector());
    return tangent_from_sphere_ambient(p, w);
  }
  const Vec3 a = so3::log_map(transpose(p.rotation_matrix()) * q.rotation_matrix());
  return {p, {a.x, a.y, a.z}};
}

// Point at parameter t on the minimizing geodesic from p (t = 0) to q (t = 1).
inline ManifoldPoint geodesic_point(const ManifoldPoint& p, const ManifoldPoint& q, double t) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("geodesic_point: t outside [0, 1]");
  if (t == 0.0) return p;
  return exp_map(p, log_map(p, q).scaled(t));
}

}  // namespace riemcorr
