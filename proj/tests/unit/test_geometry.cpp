#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "riemcorr/geometry.hpp"
#include "riemcorr/rng.hpp"

using namespace riemcorr;

namespace {

ManifoldPoint random_sphere_point(Rng& rng) {
  Vec3 v{rng.normal(), rng.normal(), rng.normal()};
  while (norm(v) < 1e-6) v = {rng.normal(), rng.normal(), rng.normal()};
  return ManifoldPoint::sphere_normalized(v);
}

ManifoldPoint random_rotation_point(Rng& rng) {
  const Vec3 a{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
  return ManifoldPoint::rotation_projected(so3::exp_map(a));
}

ManifoldPoint random_point(Manifold m, Rng& rng) {
  return m == Manifold::sphere ? random_sphere_point(rng) : random_rotation_point(rng);
}

}  // namespace

TEST_CASE("manifold constants", "[geometry]") {
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    CHECK(constants(m).injectivity_radius == kPi);
    CHECK(constants(m).convexity_radius == kPi / 2.0);
  }
}

TEST_CASE("point constructors enforce invariants", "[geometry]") {
  CHECK_THROWS_AS(ManifoldPoint::on_sphere({0.0, 0.0, 2.0}), std::invalid_argument);
  CHECK_NOTHROW(ManifoldPoint::on_sphere({0.0, 0.0, 1.0}));
  Mat3 bad = Mat3::identity();
  bad(0, 0) = 1.01;
  CHECK_THROWS_AS(ManifoldPoint::rotation(bad), std::invalid_argument);
  Mat3 reflection = Mat3::identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(ManifoldPoint::rotation(reflection), std::invalid_argument);
  CHECK_NOTHROW(ManifoldPoint::rotation(Mat3::identity()));
  // Projecting constructors repair drift.
  CHECK_NOTHROW(ManifoldPoint::sphere_normalized({0.0, 0.0, 2.0}));
  Mat3 drift = so3::exp_map({0.3, 0.2, -0.4});
  drift(0, 1) += 1e-8;
  const ManifoldPoint fixed = ManifoldPoint::rotation_projected(drift);
  CHECK(so3::is_rotation(fixed.rotation_matrix(), 1e-12));
  // Accessor tag checks.
  CHECK_THROWS_AS(ManifoldPoint::on_sphere({0, 0, 1}).rotation_matrix(), std::logic_error);
  CHECK_THROWS_AS(ManifoldPoint::rotation(Mat3::identity()).unit_vector(), std::logic_error);
}

TEST_CASE("sphere tangent vectors have two active coordinates", "[geometry]") {
  const ManifoldPoint p = ManifoldPoint::on_sphere({0, 0, 1});
  const TangentVector v{p, {0.3, -0.4, 7.0}};  // third coordinate is dropped
  CHECK(v.dim() == 2);
  CHECK(v.coord(2) == 0.0);
  CHECK(v.norm() == Catch::Approx(0.5));
  CHECK((-v).coord(0) == -0.3);
  CHECK(v.scaled(2.0).coord(1) == -0.8);
  CHECK(TangentVector::zero(p).norm() == 0.0);
}

TEST_CASE("exponential map: quarter circle and zero vector", "[geometry]") {
  const ManifoldPoint p = ManifoldPoint::on_sphere({0, 0, 1});
  // Frame at the north pole is e1=(1,0,0), e2=(0,1,0).
  const ManifoldPoint q = exp_map(p, TangentVector{p, {kPi / 2.0, 0.0, 0.0}});
  CHECK(norm(q.unit_vector() - Vec3{1, 0, 0}) < 1e-12);

  const ManifoldPoint same = exp_map(p, TangentVector::zero(p));
  CHECK(norm(same.unit_vector() - p.unit_vector()) < 1e-15);

  const ManifoldPoint r = ManifoldPoint::rotation(Mat3::identity());
  const ManifoldPoint rq = exp_map(r, TangentVector{r, {0.7, 0.0, 0.0}});
  CHECK(trace(rq.rotation_matrix()) == Catch::Approx(2.529684374568977).margin(1e-12));
  CHECK(distance(r, rq) == Catch::Approx(0.7).margin(1e-12));
}

TEST_CASE("exp/log inversion and radial isometry", "[geometry]") {
  Rng rng(11);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    for (int t = 0; t < 50; ++t) {
      const ManifoldPoint p = random_point(m, rng);
      const ManifoldPoint q = random_point(m, rng);
      const double d = distance(p, q);
      if (d > kPi - 1e-3) continue;  // stay clear of the cut locus
      const TangentVector v = log_map(p, q);
      CHECK(std::abs(v.norm() - d) < 1e-10);  // radial isometry
      const ManifoldPoint back = exp_map(p, v);
      CHECK(distance(back, q) < 1e-9);
    }
  }
}

TEST_CASE("log at the base point is zero", "[geometry]") {
  Rng rng(13);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    const ManifoldPoint p = random_point(m, rng);
    CHECK(log_map(p, p).norm() < 1e-12);
  }
}

TEST_CASE("geodesic interpolation", "[geometry]") {
  const ManifoldPoint p = ManifoldPoint::on_sphere({0, 0, 1});
  const ManifoldPoint q = ManifoldPoint::on_sphere({1, 0, 0});
  const ManifoldPoint mid = geodesic_point(p, q, 0.5);
  CHECK(norm(mid.unit_vector() - Vec3{0.7071067811865475, 0.0, 0.7071067811865475}) < 1e-12);

  CHECK(geodesic_point(p, q, 0.0) == p);
  CHECK(distance(geodesic_point(p, q, 1.0), q) < 1e-12);
  CHECK_THROWS_AS(geodesic_point(p, q, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(geodesic_point(p, q, 1.1), std::invalid_argument);

  Rng rng(17);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    const ManifoldPoint a = random_point(m, rng);
    const ManifoldPoint b = random_point(m, rng);
    const double d = distance(a, b);
    for (double t : {0.25, 0.5, 0.75}) {
      const ManifoldPoint g = geodesic_point(a, b, t);
      CHECK(std::abs(distance(a, g) - t * d) < 1e-9);
      CHECK(std::abs(distance(g, b) - (1.0 - t) * d) < 1e-9);
    }
  }
}

TEST_CASE("distances: symmetry, triangle inequality, known values", "[geometry]") {
  CHECK(distance(ManifoldPoint::on_sphere({1, 0, 0}), ManifoldPoint::on_sphere({0, 1, 0})) ==
        Catch::Approx(kPi / 2.0));
  const ManifoldPoint eye = ManifoldPoint::rotation(Mat3::identity());
  CHECK(distance(eye, eye) == 0.0);
  // Rotation by exp(skew(u * t)) with |u|=1, t=1 sits at distance 1; check
  // against the eigenvalue-phase oracle acos((tr - 1)/2).
  const Vec3 u = Vec3{1.0, 2.0, 2.0} / 3.0;
  const ManifoldPoint rot = ManifoldPoint::rotation_projected(so3::exp_map(u));
  CHECK(distance(eye, rot) == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::acos((trace(rot.rotation_matrix()) - 1.0) / 2.0) ==
        Catch::Approx(1.0).margin(1e-12));

  Rng rng(19);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    const ManifoldPoint a = random_point(m, rng);
    const ManifoldPoint b = random_point(m, rng);
    const ManifoldPoint c = random_point(m, rng);
    CHECK(distance(a, b) == Catch::Approx(distance(b, a)).margin(1e-14));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    CHECK(distance(a, b) <= constants(m).injectivity_radius + 1e-12);
  }
  CHECK_THROWS_AS(distance(ManifoldPoint::on_sphere({0, 0, 1}), eye), std::invalid_argument);
}

TEST_CASE("tangent frames are deterministic and orthonormal", "[geometry]") {
  const ManifoldPoint north = ManifoldPoint::on_sphere({0, 0, 1});
  const TangentBasis nb = tangent_basis(north);
  CHECK(nb.dim == 2);
  CHECK(norm(nb.sphere_axes[0] - Vec3{1, 0, 0}) == 0.0);
  CHECK(norm(nb.sphere_axes[1] - Vec3{0, 1, 0}) == 0.0);

  const TangentBasis ib = tangent_basis(ManifoldPoint::rotation(Mat3::identity()));
  CHECK(ib.dim == 3);
  CHECK(max_abs_diff(ib.rotation_axes[0], so3::skew({1, 0, 0})) == 0.0);
  CHECK(max_abs_diff(ib.rotation_axes[2], so3::skew({0, 0, 1})) == 0.0);

  Rng rng(23);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    for (int t = 0; t < 20; ++t) {
      const ManifoldPoint p = random_point(m, rng);
      const TangentBasis b1 = tangent_basis(p);
      const TangentBasis b2 = tangent_basis(p);
      if (m == Manifold::sphere) {
        // Bitwise determinism.
        CHECK(b1.sphere_axes[0] == b2.sphere_axes[0]);
        CHECK(b1.sphere_axes[1] == b2.sphere_axes[1]);
        // Gram identity.
        CHECK(std::abs(dot(b1.sphere_axes[0], b1.sphere_axes[0]) - 1.0) < 1e-12);
        CHECK(std::abs(dot(b1.sphere_axes[1], b1.sphere_axes[1]) - 1.0) < 1e-12);
        CHECK(std::abs(dot(b1.sphere_axes[0], b1.sphere_axes[1])) < 1e-12);
        CHECK(std::abs(dot(b1.sphere_axes[0], p.unit_vector())) < 1e-12);
      } else {
        for (int i = 0; i < 3; ++i) {
          CHECK(max_abs_diff(b1.rotation_axes[i], b2.rotation_axes[i]) == 0.0);
          for (int j = 0; j < 3; ++j) {
            const double g = so3::metric_inner(b1.rotation_axes[i], b1.rotation_axes[j]);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("log-map base-point stability", "[geometry]") {
  // Moving the base by delta moves the log norm by at most delta (plus
  // roundoff), by the triangle inequality.
  Rng rng(29);
  for (Manifold m : {Manifold::sphere, Manifold::so3}) {
    const ManifoldPoint p = random_point(m, rng);
    ManifoldPoint q = random_point(m, rng);
    while (distance(p, q) > kPi - 0.2) q = random_point(m, rng);
    const double delta = 1e-6;
    const ManifoldPoint p2 = exp_map(p, TangentVector{p, {delta, 0.0, 0.0}});
    CHECK(std::abs(log_map(p2, q).norm() - log_map(p, q).norm()) < delta + 1e-9);
  }
}

TEST_CASE("error paths: base mismatch and cut locus", "[geometry]") {
  const ManifoldPoint p = ManifoldPoint::on_sphere({0, 0, 1});
  const ManifoldPoint q = ManifoldPoint::on_sphere({1, 0, 0});
  CHECK_THROWS_AS(exp_map(q, TangentVector{p, {0.1, 0.0, 0.0}}), BaseMismatchError);
  CHECK_THROWS_AS(log_map(p, ManifoldPoint::on_sphere({0, 0, -1})), CutLocusError);
  const ManifoldPoint eye = ManifoldPoint::rotation(Mat3::identity());
  const ManifoldPoint half_turn = ManifoldPoint::rotation_projected(so3::exp_map({kPi, 0, 0}));
  CHECK_THROWS_AS(log_map(eye, half_turn), CutLocusError);
}

TEST_CASE("exponential map is defined beyond the injectivity radius", "[geometry]") {
  const ManifoldPoint p = ManifoldPoint::on_sphere({0, 0, 1});
  const ManifoldPoint around = exp_map(p, TangentVector{p, {2.0 * kPi, 0.0, 0.0}});
  CHECK(distance(around, p) < 1e-9);
  const ManifoldPoint eye = ManifoldPoint::rotation(Mat3::identity());
  const ManifoldPoint full = exp_map(eye, TangentVector{eye, {2.0 * kPi, 0.0, 0.0}});
  CHECK(distance(full, eye) < 1e-9);
}
