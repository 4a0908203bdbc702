#pragma once

// Tangent-space dependence estimators for paired manifold samples: the
// cross-covariance matrix Sigma-hat at a reference point, its trace (rcov),
// the normalized correlation (rcorr), the cross-correlation matrix, the
// point-free distance correlation (dcorr), and a one-call evaluation that
// also resolves the reference point from a policy.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riemcorr/errors.hpp"
#include "riemcorr/frechet.hpp"
#include "riemcorr/geometry.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/manifold.hpp"
#include "riemcorr/parallel.hpp"

namespace riemcorr {

// Equal-length paired observations on a common manifold.
class PairedSample {
 public:
  PairedSample(std::vector<ManifoldPoint> xs, std::vector<ManifoldPoint> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size())
      throw std::invalid_argument("PairedSample: margins differ in length");
    if (xs_.size() < 2) throw std::invalid_argument("PairedSample: need at least two pairs");
    const Manifold m = xs_[0].manifold();
    for (const ManifoldPoint& p : xs_)
      if (p.manifold() != m) throw std::invalid_argument("PairedSample: mixed manifolds");
    for (const ManifoldPoint& p : ys_)
      if (p.manifold() != m) throw std::invalid_argument("PairedSample: mixed manifolds");
  }

  const std::vector<ManifoldPoint>& xs() const { return xs_; }
  const std::vector<ManifoldPoint>& ys() const { return ys_; }
  Manifold manifold() const { return xs_[0].manifold(); }
  std::size_t size() const { return xs_.size(); }

 private:
  std::vector<ManifoldPoint> xs_;
  std::vector<ManifoldPoint> ys_;
};

// How the reference point for the tangent-space estimators is chosen.
enum class PointPolicy { common_mean, midpoint, weighted, explicit_point };

inline const char* policy_name(PointPolicy p) {
  switch (p) {
    case PointPolicy::common_mean: return "common-mean";
    case PointPolicy::midpoint: return "midpoint";
    case PointPolicy::weighted: return "weighted";
    case PointPolicy::explicit_point: return "explicit";
  }
  return "unknown";
}

inline PointPolicy policy_from_name(const std::string& s) {
  if (s == "common-mean") return PointPolicy::common_mean;
  if (s == "midpoint") return PointPolicy::midpoint;
  if (s == "weighted") return PointPolicy::weighted;
  if (s == "explicit" || s == "point") return PointPolicy::explicit_point;
  throw std::invalid_argument("unknown point policy: " + s);
}

namespace detail {

// Frame coordinates of log_p(points[k]) for every k. A point at or beyond
// the injectivity radius makes the estimator undefined; report which one.
inline std::vector<std::array<double, 3>> log_coords(const ManifoldPoint& p,
                                                     const std::vector<ManifoldPoint>& points,
                                                     const char* margin) {
  std::vector<std::array<double, 3>> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      out.push_back(log_map(p, points[i]).coords());
    } catch (const CutLocusError&) {
      throw ComparisonDomainError(std::string(margin) + " point at index " + std::to_string(i) +
                                      " lies at or beyond the injectivity radius of the "
                                      "reference point",
                                  static_cast<long>(i));
    }
  }
  return out;
}

inline SmallMatrix cross_cov_from_coords(const std::vector<std::array<double, 3>>& la,
                                         const std::vector<std::array<double, 3>>& lb, int dim) {
  const std::size_t n = la.size();
  double s[3][3] = {{0.0}};
  double ma[3] = {0.0, 0.0, 0.0};
  double mb[3] = {0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < dim; ++i) {
      ma[i] += la[k][i];
      mb[i] += lb[k][i];
      for (int j = 0; j < dim; ++j) s[i][j] += la[k][i] * lb[k][j];
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  SmallMatrix out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out.a[i][j] = s[i][j] * inv - (ma[i] * inv) * (mb[j] * inv);
  return out;
}

struct CrossCovParts {
  SmallMatrix sxy;
  double var_x = 0.0;   // trace of Sigma-hat(X,X)
  double var_y = 0.0;   // trace of Sigma-hat(Y,Y)
  double msq_x = 0.0;   // mean squared log norm, scale reference for degeneracy
  double msq_y = 0.0;
};

inline CrossCovParts cross_cov_parts(const PairedSample& sample, const ManifoldPoint& p) {
  if (sample.manifold() != p.manifold())
    throw std::invalid_argument("dependence estimator: reference point on a different manifold");
  const int dim = p.manifold() == Manifold::sphere ? 2 : 3;
  const auto lx = log_coords(p, sample.xs(), "X");
  const auto ly = log_coords(p, sample.ys(), "Y");
  CrossCovParts parts{cross_cov_from_coords(lx, ly, dim), 0.0, 0.0, 0.0, 0.0};
  parts.var_x = cross_cov_from_coords(lx, lx, dim).trace();
  parts.var_y = cross_cov_from_coords(ly, ly, dim).trace();
  const std::size_t n = lx.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < dim; ++i) {
      parts.msq_x += lx[k][i] * lx[k][i];
      parts.msq_y += ly[k][i] * ly[k][i];
    }
  }
  parts.msq_x /= static_cast<double>(n);
  parts.msq_y /= static_cast<double>(n);
  return parts;
}

// A marginal variance indistinguishable from roundoff leaves the correlation
// undefined; compare against the raw second moment for scale.
inline void require_nondegenerate(const CrossCovParts& parts, const char* what) {
  if (parts.var_x <= 1e-13 * parts.msq_x)
    throw DegenerateVarianceError(std::string(what) + ": X margin has zero Riemannian variance");
  if (parts.var_y <= 1e-13 * parts.msq_y)
    throw DegenerateVarianceError(std::string(what) + ": Y margin has zero Riemannian variance");
}

}  // namespace detail

// Sample cross-covariance Sigma-hat_p in the tangent frame of p:
// (1/N) sum (log_p x_k)(log_p y_k)^T - (mean log_p x)(mean log_p y)^T.
inline SmallMatrix sample_cross_cov(const PairedSample& sample, const ManifoldPoint& p) {
  if (sample.manifold() != p.manifold())
    throw std::invalid_argument("sample_cross_cov: reference point on a different manifold");
  const int dim = p.manifold() == Manifold::sphere ? 2 : 3;
  const auto lx = detail::log_coords(p, sample.xs(), "X");
  const auto ly = detail::log_coords(p, sample.ys(), "Y");
  return detail::cross_cov_from_coords(lx, ly, dim);
}

// Riemannian covariance at p: the trace of Sigma-hat_p.
inline double rcov(const PairedSample& sample, const ManifoldPoint& p) {
  return sample_cross_cov(sample, p).trace();
}

// Riemannian correlation at p, in [-1, 1].
inline double rcorr(const PairedSample& sample, const ManifoldPoint& p) {
  const detail::CrossCovParts parts = detail::cross_cov_parts(sample, p);
  detail::require_nondegenerate(parts, "rcorr");
  return parts.sxy.trace() / (std::sqrt(parts.var_x) * std::sqrt(parts.var_y));
}

// Cross-correlation matrix: Sigma-hat_p scaled by the square roots of the
// marginal traces. Its trace equals rcorr.
inline SmallMatrix rcorr_matrix(const PairedSample& sample, const ManifoldPoint& p) {
  const detail::CrossCovParts parts = detail::cross_cov_parts(sample, p);
  detail::require_nondegenerate(parts, "rcorr_matrix");
  return parts.sxy.scaled(1.0 / (std::sqrt(parts.var_x) * std::sqrt(parts.var_y)));
}

// Distance correlation (biased V-statistic form) from the two geodesic
// distance matrices; point-free and sign-blind, in [0, 1].
inline double dcorr(const PairedSample& sample) {
  const std::size_t n = sample.size();
  // The O(n^2) matrices are materialized; keep memory in check.
  if (n > 20000)
    throw Error("dcorr: sample too large for the O(n^2) distance matrices (max 20000)");
  std::vector<double> dx(n * n), dy(n * n);
  const std::vector<ManifoldPoint>& xs = sample.xs();
  const std::vector<ManifoldPoint>& ys = sample.ys();
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      dx[i * n + j] = distance(xs[i], xs[j]);
      dy[i * n + j] = distance(ys[i], ys[j]);
    }
  });

  std::vector<double> row_x(n, 0.0), row_y(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sx += dx[i * n + j];
      sy += dy[i * n + j];
    }
    row_x[i] = sx / static_cast<double>(n);
    row_y[i] = sy / static_cast<double>(n);
  });
  double grand_x = 0.0, grand_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    grand_x += row_x[i];
    grand_y += row_y[i];
  }
  grand_x /= static_cast<double>(n);
  grand_y /= static_cast<double>(n);

  // Per-row partial sums reduced in fixed row order: the result does not
  // depend on the worker count.
  std::vector<double> pab(n), paa(n), pbb(n);
  parallel_for(n, [&](std::size_t i) {
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = dx[i * n + j] - row_x[i] - row_x[j] + grand_x;
      const double b = dy[i * n + j] - row_y[i] - row_y[j] + grand_y;
      sab += a * b;
      saa += a * a;
      sbb += b * b;
    }
    pab[i] = sab;
    paa[i] = saa;
    pbb[i] = sbb;
  });
  double dcov2 = 0.0, dvarx2 = 0.0, dvary2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dcov2 += pab[i];
    dvarx2 += paa[i];
    dvary2 += pbb[i];
  }
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  dcov2 /= n2;
  dvarx2 /= n2;
  dvary2 /= n2;
  if (dvarx2 <= 0.0 || dvary2 <= 0.0)
    throw DegenerateVarianceError("dcorr: a margin has zero distance variance");
  return std::sqrt(std::max(0.0, dcov2 / std::sqrt(dvarx2 * dvary2)));
}

struct EvalOptions {
  FrechetSolverConfig solver{};
  // dcorr is O(n^2); allow skipping it for very large samples.
  bool with_dcorr = true;
};

// Full evaluation result: the reference point, how it was chosen, the
// estimators, the marginal Fréchet summaries, and domain diagnostics.
struct DependenceReport {
  ManifoldPoint reference_point;
  PointPolicy policy;
  std::optional<std::pair<double, double>> weights;  // set for the weighted policy
  SmallMatrix sigma_hat;
  double rcov = 0.0;
  double rcorr = 0.0;
  std::optional<double> dcorr;  // absent when skipped
  FrechetResult mean_x;
  FrechetResult mean_y;
  double frechet_mean_distance = 0.0;
  // Domain diagnostic: max distance from the reference point to any sample
  // point, to be read against the injectivity radius.
  double max_reference_distance = 0.0;
  double injectivity_radius = 0.0;
  std::size_t n = 0;
};

inline DependenceReport evaluate_dependence(
    const PairedSample& sample, PointPolicy policy, const EvalOptions& options = {},
    std::optional<std::pair<double, double>> weights = std::nullopt,
    std::optional<ManifoldPoint> explicit_point = std::nullopt) {
  const FrechetResult mean_x =
      detail::converged_mean(sample.xs(), options.solver, "evaluate_dependence (X margin)");
  const FrechetResult mean_y =
      detail::converged_mean(sample.ys(), options.solver, "evaluate_dependence (Y margin)");

  ManifoldPoint reference = mean_x.mean;
  switch (policy) {
    case PointPolicy::common_mean: {
      const FrechetResult pooled = pooled_frechet_mean(sample.xs(), sample.ys(), options.solver);
      if (!pooled.converged)
        throw ConvergenceError("evaluate_dependence: pooled Fréchet mean did not converge");
      reference = pooled.mean;
      break;
    }
    case PointPolicy::midpoint:
      reference = geodesic_point(mean_x.mean, mean_y.mean, 0.5);
      break;
    case PointPolicy::weighted: {
      if (!weights) throw std::invalid_argument("evaluate_dependence: weighted policy needs weights");
      const auto [w1, w2] = *weights;
      if (!(w1 > 0.0) || !(w2 > 0.0))
        throw std::invalid_argument("evaluate_dependence: weights must be positive");
      reference = geodesic_point(mean_x.mean, mean_y.mean, w1 / (w1 + w2));
      break;
    }
    case PointPolicy::explicit_point:
      if (!explicit_point)
        throw std::invalid_argument("evaluate_dependence: explicit policy needs a point");
      if (explicit_point->manifold() != sample.manifold())
        throw std::invalid_argument("evaluate_dependence: explicit point on a different manifold");
      reference = *explicit_point;
      break;
  }

  const detail::CrossCovParts parts = detail::cross_cov_parts(sample, reference);
  detail::require_nondegenerate(parts, "evaluate_dependence");

  DependenceReport report{reference,
                          policy,
                          policy == PointPolicy::weighted ? weights : std::nullopt,
                          parts.sxy,
                          parts.sxy.trace(),
                          parts.sxy.trace() /
                              (std::sqrt(parts.var_x) * std::sqrt(parts.var_y)),
                          std::nullopt,
                          mean_x,
                          mean_y,
                          distance(mean_x.mean, mean_y.mean),
                          0.0,
                          constants(sample.manifold()).injectivity_radius,
                          sample.size()};
  if (options.with_dcorr) report.dcorr = dcorr(sample);

  double max_dist = 0.0;
  for (const ManifoldPoint& p : sample.xs()) max_dist = std::max(max_dist, distance(reference, p));
  for (const ManifoldPoint& p : sample.ys()) max_dist = std::max(max_dist, distance(reference, p));
  report.max_reference_distance = max_dist;
  return report;
}

}  // namespace riemcorr
