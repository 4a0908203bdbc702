#pragma once

// Unit 2-sphere geometry kernels and von Mises-Fisher sampling.
// Points are unit 3-vectors; tangent vectors at p are ambient 3-vectors
// orthogonal to p. The geodesic distance is the central angle.

#include <cmath>
#include <utility>
#include <vector>

#include "riemcorr/errors.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/rng.hpp"

namespace riemcorr::sphere {

// Guard band around the cut locus; the log map is refused past pi - kCutGuard.
constexpr double kCutGuard = 1e-8;

inline double distance(const Vec3& p, const Vec3& q) {
  // atan2 form is well conditioned at both ends of [0, pi].
  return std::atan2(norm(cross(p, q)), dot(p, q));
}

inline Vec3 exp_map(const Vec3& p, const Vec3& w) {
  const double theta = norm(w);
  if (theta < 1e-12) return normalized(p + w);
  return normalized(std::cos(theta) * p + (std::sin(theta) / theta) * w);
}

inline Vec3 log_map(const Vec3& p, const Vec3& q) {
  const Vec3 u = q - dot(p, q) * p;
  const double s = norm(u);
  const double theta = std::atan2(s, dot(p, q));
  if (theta > kPi - kCutGuard)
    throw CutLocusError("sphere log map: points are antipodal within the cut-locus guard");
  if (s < 1e-300) return {0.0, 0.0, 0.0};
  return (theta / s) * u;
}

// Deterministic orthonormal frame of the tangent plane at p.
// Seed axis: the canonical axis e_i with the smallest |p_i| (lowest index on
// ties), which keeps the projection well conditioned everywhere.
inline std::pair<Vec3, Vec3> tangent_frame(const Vec3& p) {
  int k = 0;
  double best = std::abs(p.x);
  if (std::abs(p.y) < best) {
    k = 1;
    best = std::abs(p.y);
  }
  if (std::abs(p.z) < best) k = 2;
  Vec3 a{0.0, 0.0, 0.0};
  a[k] = 1.0;
  const Vec3 e1 = normalized(a - dot(a, p) * p);
  const Vec3 e2 = cross(p, e1);
  return {e1, e2};
}

struct VmfParams {
  Vec3 mu;
  double kappa;

  VmfParams(const Vec3& mu_, double kappa_) : mu(mu_), kappa(kappa_) {
    if (std::abs(norm(mu) - 1.0) > 1e-12)
      throw std::invalid_argument("VmfParams: mean direction must be a unit vector");
    if (!(kappa > 0.0)) throw std::invalid_argument("VmfParams: kappa must be positive");
  }
};

// log of  kappa / (4 pi sinh kappa) * exp(kappa mu.x),
// with log sinh(k) = k + log(1 - e^{-2k}) - log 2 so large kappa cannot overflow.
inline double vmf_log_density(const VmfParams& params, const Vec3& x) {
  const double k = params.kappa;
  const double log_sinh = k + std::log1p(-std::exp(-2.0 * k)) - std::log(2.0);
  return std::log(k) - std::log(4.0 * kPi) - log_sinh + k * dot(params.mu, x);
}

inline double vmf_density(const VmfParams& params, const Vec3& x) {
  if (params.kappa > 700.0) return std::exp(vmf_log_density(params, x));
  return params.kappa / (4.0 * kPi * std::sinh(params.kappa)) *
         std::exp(params.kappa * dot(params.mu, x));
}

// Exact inverse-CDF sampler. The cosine w of the colatitude about mu has
// density proportional to e^{kappa w} on [-1, 1]:
//   w = 1 + log(u + (1-u) e^{-2 kappa}) / kappa,  u ~ U(0, 1],
// the azimuth is uniform, and the north-pole frame is carried to mu by the
// deterministic tangent frame.
inline std::vector<Vec3> vmf_sample(const VmfParams& params, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("vmf_sample: need n >= 1");
  const auto [e1, e2] = tangent_frame(params.mu);
  std::vector<Vec3> out;
  out.reserve(n);
  const double k = params.kappa;
  const double e2k = std::exp(-2.0 * k);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_pos();
    double w = 1.0 + std::log(u + (1.0 - u) * e2k) / k;
    if (w < -1.0) w = -1.0;
    if (w > 1.0) w = 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    const double phi = 2.0 * kPi * rng.uniform();
    out.push_back(normalized(s * std::cos(phi) * e1 + s * std::sin(phi) * e2 + w * params.mu));
  }
  return out;
}

}  // namespace riemcorr::sphere
