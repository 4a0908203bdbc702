#pragma once

// Generative models for the simulation studies: von Mises-Fisher samples on
// the sphere pushed through a rotate-perturb-normalize map, clipped-Gaussian
// tangent samples on SO(3) pushed through per-sample axis rotations and a
// left translation, fully independent margins, and the noise-sweep harness
// that tabulates rcorr/dcorr across a noise grid with replications.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemcorr/dependence.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/manifold.hpp"
#include "riemcorr/parallel.hpp"
#include "riemcorr/rng.hpp"
#include "riemcorr/so3.hpp"
#include "riemcorr/sphere.hpp"

namespace riemcorr {

enum class Scenario { same_mean, rotated, negative, independent };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::same_mean: return "same-mean";
    case Scenario::rotated: return "rotated";
    case Scenario::negative: return "negative";
    case Scenario::independent: return "independent";
  }
  return "unknown";
}

inline Scenario scenario_from_name(const std::string& s) {
  if (s == "same-mean") return Scenario::same_mean;
  if (s == "rotated") return Scenario::rotated;
  if (s == "negative") return Scenario::negative;
  if (s == "independent") return Scenario::independent;
  throw std::invalid_argument("unknown scenario: " + s);
}

struct ScenarioConfig {
  Manifold manifold = Manifold::sphere;
  Scenario scenario = Scenario::same_mean;
  int n = 100;
  std::uint64_t seed = 1;
  double noise = 0.0;  // epsilon
  bool independent = false;

  // Sphere margin: X ~ VMF(mu, kappa), Y = (R X + b)/|R X + b| with R the
  // rotation about rotation_axis by rotation_angle and b ~ N(0, noise^2 I).
  Vec3 mu{0.0, 0.0, 1.0};
  double kappa = 9.0;
  Vec3 rotation_axis{0.0, 1.0, 0.0};
  double rotation_angle = 0.0;
  // Second sphere margin for the independent scenario.
  Vec3 mu2 = normalized(Vec3{0.0, 1.0, 1.0});
  double kappa2 = 5.0;

  // SO(3) margin: A ~ N3(0, I) clipped so |Phi(A)|_F <= alpha, X = exp(Phi(A));
  // Y = B exp(Phi(R_i A + W)) with R_i the rotation by theta about an axis
  // orthogonal to A and W ~ N3(0, noise I).
  double alpha = 0.6;
  Mat3 b_rotation = Mat3::identity();
  double theta = 0.0;
  // Clip bound of the second margin for the independent scenario.
  double alpha2 = 0.6;
};

// Figure-caption presets for the four scenarios on each manifold.
inline ScenarioConfig make_scenario(Manifold manifold, Scenario scenario, int n = 100,
                                    double noise = 0.0, std::uint64_t seed = 1) {
  ScenarioConfig c;
  c.manifold = manifold;
  c.scenario = scenario;
  c.n = n;
  c.noise = noise;
  c.seed = seed;
  if (manifold == Manifold::sphere) {
    switch (scenario) {
      case Scenario::same_mean:
        break;  // mu=(0,0,1), kappa=9, angle 0
      case Scenario::rotated:
        c.rotation_axis = {0.0, 1.0, 0.0};
        c.rotation_angle = kPi / 6.0;
        break;
      case Scenario::negative:
        c.rotation_axis = normalized(Vec3{1.0, 1.0, 1.0});
        c.rotation_angle = kPi;
        break;
      case Scenario::independent:
        c.independent = true;
        c.kappa = 4.0;  // kappa_1 = 4, kappa_2 = 5
        break;
    }
  } else {
    switch (scenario) {
      case Scenario::same_mean:
        break;  // alpha=0.6, B=I, theta=0
      case Scenario::rotated:
        c.b_rotation = so3::exp_map({1.0, 0.0, 0.0});
        c.theta = kPi / 6.0;
        break;
      case Scenario::negative:
        c.theta = kPi;
        break;
      case Scenario::independent:
        c.independent = true;
        break;
    }
  }
  return c;
}

inline void validate_config(const ScenarioConfig& c) {
  if (c.n < 2) throw std::invalid_argument("scenario: n must be at least 2");
  if (!(c.noise >= 0.0)) throw std::invalid_argument("scenario: noise must be nonnegative");
  if (c.manifold == Manifold::sphere) {
    if (std::abs(norm(c.mu) - 1.0) > 1e-6)
      throw std::invalid_argument("scenario: mu must be a unit vector");
    if (!(c.kappa > 0.0)) throw std::invalid_argument("scenario: kappa must be positive");
    if (c.independent) {
      if (std::abs(norm(c.mu2) - 1.0) > 1e-6)
        throw std::invalid_argument("scenario: mu2 must be a unit vector");
      if (!(c.kappa2 > 0.0)) throw std::invalid_argument("scenario: kappa2 must be positive");
    } else if (std::abs(norm(c.rotation_axis) - 1.0) > 1e-6) {
      throw std::invalid_argument("scenario: rotation-axis must be a unit vector");
    }
  } else {
    if (!(c.alpha > 0.0 && c.alpha < kPi / 2.0))
      throw std::invalid_argument("scenario: alpha must lie in (0, pi/2)");
    if (c.independent && !(c.alpha2 > 0.0 && c.alpha2 < kPi / 2.0))
      throw std::invalid_argument("scenario: alpha2 must lie in (0, pi/2)");
    if (!c.independent && !so3::is_rotation(c.b_rotation, 1e-8))
      throw std::invalid_argument("scenario: B must be a rotation matrix");
  }
}

// Rescale A so the Frobenius norm of Phi(A) ends up at or below alpha even
// after rounding (|Phi(A)|_F = sqrt(2) |A|).
inline Vec3 clip_to_alpha(Vec3 a, double alpha) {
  constexpr double kSqrt2 = 1.4142135623730951;
  double f = kSqrt2 * norm(a);
  while (f > alpha) {
    a = a * (alpha / f);
    f = kSqrt2 * norm(a);
  }
  return a;
}

// Rotation axis orthogonal to A for the SO(3) perturbation: (-a2, a1, 0)
// when a3 != 0, (0, 0, 1) when a3 = 0. The orthogonality is exact in
// floating point. A = (0, 0, a3) leaves no preferred direction; any axis
// orthogonal to A works and (1, 0, 0) is used.
inline Vec3 perturbation_axis(const Vec3& a) {
  if (a.z == 0.0) return {0.0, 0.0, 1.0};
  Vec3 l{-a.y, a.x, 0.0};
  if (norm(l) < 1e-12) return {1.0, 0.0, 0.0};
  return normalized(l);
}

namespace detail {

inline std::vector<ManifoldPoint> to_sphere_points(const std::vector<Vec3>& vs) {
  std::vector<ManifoldPoint> out;
  out.reserve(vs.size());
  for (const Vec3& v : vs) out.push_back(ManifoldPoint::on_sphere(v));
  return out;
}

// One clipped-Gaussian SO(3) margin: X_i = exp(Phi(clip(A_i))).
inline std::vector<ManifoldPoint> so3_clipped_margin(std::size_t n, double alpha, Rng& rng,
                                                     std::vector<Vec3>* tangents = nullptr) {
  std::vector<ManifoldPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 raw{rng.normal(), rng.normal(), rng.normal()};
    const Vec3 a = clip_to_alpha(raw, alpha);
    out.push_back(ManifoldPoint::rotation_projected(so3::exp_map(a)));
    if (tangents) tangents->push_back(a);
  }
  return out;
}

}  // namespace detail

// Sphere pair: X ~ VMF(mu, kappa); Y_i = (R X_i + b_i)/|R X_i + b_i| with
// b_i ~ N(0, noise^2 I). A degenerate normalization (norm below 1e-12, a
// probability-zero event) is handled by redrawing b_i.
inline PairedSample gen_sphere_pair(const ScenarioConfig& c) {
  validate_config(c);
  if (c.manifold != Manifold::sphere || c.independent)
    throw std::invalid_argument("gen_sphere_pair: config is not a dependent sphere scenario");
  Rng rng(c.seed);
  const std::vector<Vec3> xs_v =
      sphere::vmf_sample({normalized(c.mu), c.kappa}, static_cast<std::size_t>(c.n), rng);
  const Mat3 r = so3::rotation_from_axis_angle({normalized(c.rotation_axis), c.rotation_angle});
  std::vector<ManifoldPoint> ys;
  ys.reserve(xs_v.size());
  for (const Vec3& x : xs_v) {
    Vec3 y;
    do {
      const Vec3 b{c.noise * rng.normal(), c.noise * rng.normal(), c.noise * rng.normal()};
      y = r * x + b;
    } while (norm(y) < 1e-12);
    ys.push_back(ManifoldPoint::sphere_normalized(y));
  }
  return PairedSample(detail::to_sphere_points(xs_v), std::move(ys));
}

// SO(3) pair: A_i ~ N3(0, I) clipped to alpha, X_i = exp(Phi(A_i));
// A'_i = R_i A_i + W_i with R_i the rotation by theta about an axis
// orthogonal to A_i and W_i ~ N3(0, noise I); Y_i = B exp(Phi(A'_i)).
inline PairedSample gen_so3_pair(const ScenarioConfig& c) {
  validate_config(c);
  if (c.manifold != Manifold::so3 || c.independent)
    throw std::invalid_argument("gen_so3_pair: config is not a dependent SO(3) scenario");
  Rng rng(c.seed);
  std::vector<Vec3> tangents;
  tangents.reserve(static_cast<std::size_t>(c.n));
  std::vector<ManifoldPoint> xs =
      detail::so3_clipped_margin(static_cast<std::size_t>(c.n), c.alpha, rng, &tangents);
  const double sdev = std::sqrt(c.noise);  // W ~ N3(0, noise I)
  std::vector<ManifoldPoint> ys;
  ys.reserve(tangents.size());
  for (const Vec3& a : tangents) {
    const Mat3 ri = so3::rotation_from_axis_angle({perturbation_axis(a), c.theta});
    const Vec3 w{sdev * rng.normal(), sdev * rng.normal(), sdev * rng.normal()};
    const Vec3 ap = ri * a + w;
    ys.push_back(ManifoldPoint::rotation_projected(c.b_rotation * so3::exp_map(ap)));
  }
  return PairedSample(std::move(xs), std::move(ys));
}

// Fully independent margins drawn from split generator streams; the pairing
// is positional only.
inline PairedSample gen_independent_pair(const ScenarioConfig& c) {
  validate_config(c);
  if (!c.independent)
    throw std::invalid_argument("gen_independent_pair: independence flag not set");
  const Rng base(c.seed);
  Rng rng_x = base.split(1);
  Rng rng_y = base.split(2);
  const std::size_t n = static_cast<std::size_t>(c.n);
  if (c.manifold == Manifold::sphere) {
    std::vector<ManifoldPoint> xs =
        detail::to_sphere_points(sphere::vmf_sample({normalized(c.mu), c.kappa}, n, rng_x));
    std::vector<ManifoldPoint> ys =
        detail::to_sphere_points(sphere::vmf_sample({normalized(c.mu2), c.kappa2}, n, rng_y));
    return PairedSample(std::move(xs), std::move(ys));
  }
  std::vector<ManifoldPoint> xs = detail::so3_clipped_margin(n, c.alpha, rng_x);
  std::vector<ManifoldPoint> ys = detail::so3_clipped_margin(n, c.alpha2, rng_y);
  return PairedSample(std::move(xs), std::move(ys));
}

inline PairedSample generate(const ScenarioConfig& c) {
  if (c.independent) return gen_independent_pair(c);
  return c.manifold == Manifold::sphere ? gen_sphere_pair(c) : gen_so3_pair(c);
}

// Population Fréchet means of the two margins implied by the config.
inline ManifoldPoint population_mean_x(const ScenarioConfig& c) {
  return c.manifold == Manifold::sphere ? ManifoldPoint::on_sphere(normalized(c.mu))
                                        : ManifoldPoint::rotation(Mat3::identity());
}

inline ManifoldPoint population_mean_y(const ScenarioConfig& c) {
  if (c.manifold == Manifold::sphere) {
    if (c.independent) return ManifoldPoint::on_sphere(normalized(c.mu2));
    const Mat3 r = so3::rotation_from_axis_angle({normalized(c.rotation_axis), c.rotation_angle});
    return ManifoldPoint::sphere_normalized(r * normalized(c.mu));
  }
  if (c.independent) return ManifoldPoint::rotation(Mat3::identity());
  return ManifoldPoint::rotation_projected(c.b_rotation);
}

// Reference-point policy for sweeps: the common (pooled) mean when the
// configured transformation fixes the Fréchet mean of the X margin, the
// midpoint of the marginal means otherwise.
inline PointPolicy auto_policy(const ScenarioConfig& c) {
  const double gap = distance(population_mean_x(c), population_mean_y(c));
  return gap < 1e-9 ? PointPolicy::common_mean : PointPolicy::midpoint;
}

struct SweepConfig {
  ScenarioConfig scenario;
  std::vector<double> noise_grid;
  int replications = 50;
  std::uint64_t base_seed = 1;
  EvalOptions eval{};
};

// One output row: a replication cell or a per-epsilon summary ("mean"/"sd"
// in the replication column). Numeric fields are empty when a cell failed.
struct SweepRow {
  std::string manifold;
  std::string scenario;
  double epsilon = 0.0;
  std::string replication;
  int n = 0;
  std::string seed;  // empty on summary rows
  std::string policy;
  std::optional<double> rcorr;
  std::optional<double> dcorr;
  std::optional<double> rcov;
  std::optional<double> frechet_dist_means;
  std::string error;
};

inline void validate_sweep(const SweepConfig& sweep) {
  validate_config(sweep.scenario);
  if (sweep.noise_grid.empty()) throw std::invalid_argument("sweep: empty noise grid");
  for (std::size_t i = 0; i < sweep.noise_grid.size(); ++i) {
    if (!(sweep.noise_grid[i] >= 0.0))
      throw std::invalid_argument("sweep: noise levels must be nonnegative");
    if (i > 0 && sweep.noise_grid[i] < sweep.noise_grid[i - 1])
      throw std::invalid_argument("sweep: noise grid must be nondecreasing");
  }
  if (sweep.replications < 1) throw std::invalid_argument("sweep: replications must be at least 1");
}

namespace detail {

struct RunningStat {
  std::size_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double v) {
    ++count;
    sum += v;
    sumsq += v * v;
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
  std::optional<double> sd() const {  // sample standard deviation
    if (count < 2) return std::nullopt;
    const double m = sum / static_cast<double>(count);
    const double var = (sumsq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
    return std::sqrt(std::max(0.0, var));
  }
};

}  // namespace detail

// Grid x replications sweep. Every cell gets its own derived seed, cells are
// independent (and may run in parallel), failures are recorded in the error
// column without aborting, and each epsilon block is followed by a mean row
// and a sample-standard-deviation row over its successful replications.
inline std::vector<SweepRow> run_sweep(const SweepConfig& sweep) {
  validate_sweep(sweep);
  const std::size_t reps = static_cast<std::size_t>(sweep.replications);
  const std::size_t cells = sweep.noise_grid.size() * reps;
  std::vector<SweepRow> cell_rows(cells);
  parallel_for(cells, [&](std::size_t idx) {
    const std::size_t ei = idx / reps;
    const std::size_t rep = idx % reps;
    ScenarioConfig cfg = sweep.scenario;
    cfg.noise = sweep.noise_grid[ei];
    cfg.seed = cell_seed(sweep.base_seed, ei, rep);
    SweepRow row;
    row.manifold = manifold_name(cfg.manifold);
    row.scenario = scenario_name(cfg.scenario);
    row.epsilon = cfg.noise;
    row.replication = std::to_string(rep);
    row.n = cfg.n;
    row.seed = std::to_string(cfg.seed);
    const PointPolicy policy = auto_policy(cfg);
    row.policy = policy_name(policy);
    try {
      const PairedSample sample = generate(cfg);
      const DependenceReport report = evaluate_dependence(sample, policy, sweep.eval);
      row.rcorr = report.rcorr;
      row.dcorr = report.dcorr;
      row.rcov = report.rcov;
      row.frechet_dist_means = report.frechet_mean_distance;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    cell_rows[idx] = row;
  });

  std::vector<SweepRow> out;
  out.reserve(cells + 2 * sweep.noise_grid.size());
  for (std::size_t ei = 0; ei < sweep.noise_grid.size(); ++ei) {
    detail::RunningStat s_rcorr, s_dcorr, s_rcov, s_dist;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const SweepRow& row = cell_rows[ei * reps + rep];
      if (row.error.empty()) {
        if (row.rcorr) s_rcorr.add(*row.rcorr);
        if (row.dcorr) s_dcorr.add(*row.dcorr);
        if (row.rcov) s_rcov.add(*row.rcov);
        if (row.frechet_dist_means) s_dist.add(*row.frechet_dist_means);
      }
      out.push_back(row);
    }
    SweepRow summary;
    summary.manifold = manifold_name(sweep.scenario.manifold);
    summary.scenario = scenario_name(sweep.scenario.scenario);
    summary.epsilon = sweep.noise_grid[ei];
    summary.n = sweep.scenario.n;
    summary.policy = policy_name(auto_policy(sweep.scenario));
    summary.replication = "mean";
    summary.rcorr = s_rcorr.mean();
    summary.dcorr = s_dcorr.mean();
    summary.rcov = s_rcov.mean();
    summary.frechet_dist_means = s_dist.mean();
    out.push_back(summary);
    summary.replication = "sd";
    summary.rcorr = s_rcorr.sd();
    summary.dcorr = s_dcorr.sd();
    summary.rcov = s_rcov.sd();
    summary.frechet_dist_means = s_dist.sd();
    out.push_back(summary);
  }
  return out;
}

}  // namespace riemcorr
