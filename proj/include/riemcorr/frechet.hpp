#pragma once

// Fréchet functions, sample Fréchet means (Karcher fixed-point solver), and
// the derived evaluation points used by the dependence estimators: pooled
// mean of two samples, midpoint of the two marginal means, and the weighted
// point on the geodesic between them.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemcorr/errors.hpp"
#include "riemcorr/geometry.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/manifold.hpp"
#include "riemcorr/sphere.hpp"
#include "riemcorr/so3.hpp"

namespace riemcorr {

struct FrechetSolverConfig {
  // Stop once the Karcher gradient norm (the norm of the mean log) drops
  // below this.
  double tolerance = 1e-10;
  int max_iterations = 1000;
  // Initial fixed-point step size; halved whenever a step would increase the
  // Fréchet function, at most 30 times.
  double step = 1.0;
  // Attach the sample-spread diagnostic to the result (exact pairwise
  // diameter for small samples, a two-radius bound for large ones).
  bool diameter_diagnostic = true;
};

struct FrechetResult {
  ManifoldPoint mean;
  double total_variance = 0.0;  // mean squared distance to the mean, rad^2
  int iterations = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
  // Spread diagnostic: the max pairwise distance within the sample, or an
  // upper bound (twice the max distance from the mean) for large samples.
  double sample_diameter = 0.0;
  bool diameter_is_bound = false;
  // Set when the diameter (or its bound) exceeds twice the convexity radius;
  // uniqueness of the mean is then no longer guaranteed.
  bool diameter_warning = false;
};

namespace detail {

inline void check_sample(const std::vector<ManifoldPoint>& points, const char* where) {
  if (points.empty()) throw std::invalid_argument(std::string(where) + ": empty sample");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].manifold() != points[0].manifold())
      throw std::invalid_argument(std::string(where) + ": mixed manifolds in sample");
  }
}

// Euclidean average mapped back to the manifold: normalized mean vector on
// the sphere, polar projection of the entrywise mean on SO(3). Falls back to
// the first sample point when the average is degenerate.
inline ManifoldPoint extrinsic_mean(const std::vector<ManifoldPoint>& points) {
  const double n = static_cast<double>(points.size());
  if (points[0].manifold() == Manifold::sphere) {
    Vec3 s{0.0, 0.0, 0.0};
    for (const ManifoldPoint& p : points) s = s + p.unit_vector();
    if (norm(s) < 1e-12) return points[0];
    return ManifoldPoint::sphere_normalized(s);
  }
  Mat3 m{};
  for (const ManifoldPoint& p : points) m = m + p.rotation_matrix();
  m = m * (1.0 / n);
  if (det(m) <= 1e-8) return points[0];
  return ManifoldPoint::rotation_projected(m);
}

inline TangentVector mean_log(const ManifoldPoint& at, const std::vector<ManifoldPoint>& points) {
  std::array<double, 3> acc{0.0, 0.0, 0.0};
  for (const ManifoldPoint& p : points) {
    const TangentVector v = log_map(at, p);
    acc[0] += v.coord(0);
    acc[1] += v.coord(1);
    acc[2] += v.coord(2);
  }
  const double inv = 1.0 / static_cast<double>(points.size());
  return TangentVector{at, {acc[0] * inv, acc[1] * inv, acc[2] * inv}};
}

inline double mean_sq_dist(const ManifoldPoint& at, const std::vector<ManifoldPoint>& points) {
  double s = 0.0;
  for (const ManifoldPoint& p : points) {
    const double d = distance(at, p);
    s += d * d;
  }
  return s / static_cast<double>(points.size());
}

inline void attach_diameter(FrechetResult& res, const std::vector<ManifoldPoint>& points) {
  constexpr std::size_t kExactLimit = 2000;  // O(n^2) exact scan up to here
  const std::size_t n = points.size();
  if (n <= kExactLimit) {
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) diam = std::max(diam, distance(points[i], points[j]));
    res.sample_diameter = diam;
    res.diameter_is_bound = false;
  } else {
    double radius = 0.0;
    for (const ManifoldPoint& p : points) radius = std::max(radius, distance(res.mean, p));
    res.sample_diameter = 2.0 * radius;
    res.diameter_is_bound = true;
  }
  res.diameter_warning =
      res.sample_diameter > 2.0 * constants(points[0].manifold()).convexity_radius;
}

}  // namespace detail

// Empirical Fréchet function: the mean of d(x_k, p)^r over the sample.
inline double frechet_function(const std::vector<ManifoldPoint>& points, const ManifoldPoint& p,
                               double r = 2.0) {
  detail::check_sample(points, "frechet_function");
  if (!(r > 0.0)) throw std::invalid_argument("frechet_function: order r must be positive");
  if (points[0].manifold() != p.manifold())
    throw std::invalid_argument("frechet_function: sample and point on different manifolds");
  double s = 0.0;
  for (const ManifoldPoint& x : points) {
    const double d = distance(x, p);
    s += (r == 2.0) ? d * d : std::pow(d, r);
  }
  return s / static_cast<double>(points.size());
}

// Sample Fréchet mean by Karcher fixed-point iteration mu <- exp_mu(tau *
// mean log_mu x_k), initialized at the extrinsic average. Non-convergence is
// reported through the `converged` flag, never silently.
inline FrechetResult frechet_mean(const std::vector<ManifoldPoint>& points,
                                  const FrechetSolverConfig& config = {}) {
  detail::check_sample(points, "frechet_mean");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("frechet_mean: tolerance must be positive");
  if (config.max_iterations < 0) throw std::invalid_argument("frechet_mean: negative max_iterations");
  if (!(config.step > 0.0)) throw std::invalid_argument("frechet_mean: step must be positive");

  FrechetResult res{points[0], 0.0, 0, 0.0, true, 0.0, false, false};
  if (points.size() == 1) return res;
  if (points.size() == 2) {
    const double d01 = distance(points[0], points[1]);
    if (d01 >= constants(points[0].manifold()).injectivity_radius - 1e-8)
      throw NonUniqueMeanError("frechet_mean: antipodal point pair has no unique mean");
  }

  ManifoldPoint mu = detail::extrinsic_mean(points);
  double f = detail::mean_sq_dist(mu, points);
  TangentVector grad = detail::mean_log(mu, points);
  double gnorm = grad.norm();
  double tau = config.step;
  int iterations = 0;
  int halvings = 0;
  bool converged = gnorm < config.tolerance;

  while (!converged && iterations < config.max_iterations) {
    const ManifoldPoint candidate = exp_map(mu, grad.scaled(tau));
    const double fc = detail::mean_sq_dist(candidate, points);
    ++iterations;
    // Accept any step that does not increase F2 beyond roundoff; otherwise
    // halve the step (the comparison is pure noise once F2 has stagnated).
    if (fc <= f + 1e-12 * (1.0 + std::abs(f))) {
      mu = candidate;
      f = fc;
    } else {
      if (++halvings > 30) break;
      tau *= 0.5;
      continue;  // gradient at mu is unchanged; retry with the smaller step
    }
    grad = detail::mean_log(mu, points);
    gnorm = grad.norm();
    converged = gnorm < config.tolerance;
  }

  res.mean = mu;
  res.total_variance = f;
  res.iterations = iterations;
  res.final_gradient_norm = gnorm;
  res.converged = converged;
  if (config.diameter_diagnostic) detail::attach_diameter(res, points);
  return res;
}

namespace detail {

inline FrechetResult converged_mean(const std::vector<ManifoldPoint>& points,
                                    const FrechetSolverConfig& config, const char* where) {
  FrechetResult r = frechet_mean(points, config);
  if (!r.converged)
    throw ConvergenceError(std::string(where) + ": Fréchet mean did not converge (gradient norm " +
                           std::to_string(r.final_gradient_norm) + ")");
  return r;
}

}  // namespace detail

// Geodesic midpoint of the two marginal Fréchet means.
inline ManifoldPoint midpoint_of_means(const std::vector<ManifoldPoint>& xs,
                                       const std::vector<ManifoldPoint>& ys,
                                       const FrechetSolverConfig& config = {}) {
  const FrechetResult mx = detail::converged_mean(xs, config, "midpoint_of_means");
  const FrechetResult my = detail::converged_mean(ys, config, "midpoint_of_means");
  return geodesic_point(mx.mean, my.mean, 0.5);
}

// Point gamma(w1/(w1+w2)) on the geodesic gamma with gamma(0) = mean(X) and
// gamma(1) = mean(Y).
inline ManifoldPoint weighted_point_of_means(const std::vector<ManifoldPoint>& xs,
                                             const std::vector<ManifoldPoint>& ys, double w1,
                                             double w2, const FrechetSolverConfig& config = {}) {
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw std::invalid_argument("weighted_point_of_means: weights must be positive");
  const FrechetResult mx = detail::converged_mean(xs, config, "weighted_point_of_means");
  const FrechetResult my = detail::converged_mean(ys, config, "weighted_point_of_means");
  return geodesic_point(mx.mean, my.mean, w1 / (w1 + w2));
}

// Fréchet mean of the concatenation of the two samples (2N points).
inline FrechetResult pooled_frechet_mean(const std::vector<ManifoldPoint>& xs,
                                         const std::vector<ManifoldPoint>& ys,
                                         const FrechetSolverConfig& config = {}) {
  std::vector<ManifoldPoint> pooled;
  pooled.reserve(xs.size() + ys.size());
  pooled.insert(pooled.end(), xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  return frechet_mean(pooled, config);
}

}  // namespace riemcorr
