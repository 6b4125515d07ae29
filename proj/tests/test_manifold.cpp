#include <doctest.h>

#include "cfb/manifold.hpp"

using namespace cfb;
using geom::EmbeddedManifold;

TEST_CASE("retract: radial projection onto S2") {
  const EmbeddedManifold s2 = geom::sphere(3);
  const Vec p = s2.retract((Vec(3) << 2, 0, 0).finished());
  CHECK((p - (Vec(3) << 1, 0, 0).finished()).norm() <= 1e-10);
}

TEST_CASE("retract: fixed point when already on the manifold") {
  const EmbeddedManifold s3 = geom::sphere(4);
  Vec p(4);
  p << 0.5, 0.5, 0.5, 0.5;
  const Vec q = s3.retract(p);
  CHECK((q - p).norm() == 0.0);  // zero iterations
}

TEST_CASE("retract: axial point onto ellipsoid |z1|^2 + 2|z2|^2 = 1") {
  const EmbeddedManifold e = geom::ellipsoid((Vec(2) << 1, 2).finished());
  const Vec p = e.retract((Vec(4) << 0, 0, 1, 0).finished());
  Vec expect(4);
  expect << 0, 0, 1.0 / std::sqrt(2.0), 0;
  CHECK((p - expect).norm() <= 1e-10);
}

TEST_CASE("retract is idempotent") {
  const EmbeddedManifold e = geom::ellipsoid((Vec(3) << 1, 2, 3).finished());
  Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    const Vec q = rng.normal_vec(6);
    const Vec p1 = e.retract(q);
    const Vec p2 = e.retract(p1);
    CHECK((p1 - p2).norm() <= 1e-10);
  }
}

TEST_CASE("tangent frames are orthonormal and annihilated by the Jacobian") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const auto samples = s3.sample(100, 99);
  for (const Vec& p : samples.points) {
    const auto frame = s3.tangent_frame(p);
    CHECK(frame.dim() == 3);
    const Mat gram = frame.columns.transpose() * frame.columns;
    CHECK((gram - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    const Mat J = s3.constraint_jacobian(p);
    CHECK((J * frame.columns).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("frame at the north pole of S2 spans the horizontal plane") {
  const EmbeddedManifold s2 = geom::sphere(3);
  const auto frame = s2.tangent_frame((Vec(3) << 0, 0, 1).finished());
  CHECK(frame.dim() == 2);
  for (int c = 0; c < 2; ++c) CHECK(std::abs(frame.columns(2, c)) <= 1e-12);
}

TEST_CASE("ellipsoid in C^n has frame dimension 2n-1") {
  for (int n : {2, 3}) {
    Vec a(n);
    for (int j = 0; j < n; ++j) a[j] = j + 1;
    const EmbeddedManifold e = geom::ellipsoid(a);
    const Vec p = e.sample(1, 1).points[0];
    CHECK(e.tangent_frame(p).dim() == 2 * n - 1);
  }
}

TEST_CASE("sampling lands on the manifold and is deterministic") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const auto a = s3.sample(10, 42);
  const auto b = s3.sample(10, 42);
  REQUIRE(a.count() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(a.points[i].norm() - 1.0) <= 1e-10);
    CHECK(a.points[i] == b.points[i]);  // bit-for-bit
  }

  const EmbeddedManifold e = geom::ellipsoid((Vec(3) << 1, 2, 3).finished());
  const auto big = e.sample(1000, 7);
  for (const Vec& p : big.points) CHECK(e.residual(p) <= 1e-10);
}

TEST_CASE("trivial constraint manifold covers the whole space") {
  const EmbeddedManifold r3 = geom::euclidean_space(3);
  CHECK(r3.dim() == 3);
  const Vec q = (Vec(3) << 4, -1, 0.5).finished();
  CHECK((r3.retract(q) - q).norm() == 0.0);
  CHECK(r3.tangent_frame(q).columns == Mat::Identity(3, 3));
}

TEST_CASE("product manifold stacks constraints") {
  const auto prod = geom::product_manifold("S2xS1", geom::sphere(3), geom::sphere(2));
  CHECK(prod.ambient_dim() == 5);
  CHECK(prod.dim() == 3);
  const auto s = prod.sample(20, 3);
  for (const Vec& p : s.points) {
    CHECK(std::abs(p.head(3).norm() - 1.0) <= 1e-9);
    CHECK(std::abs(p.tail(2).norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("parallel map over samples equals sequential execution") {
  const EmbeddedManifold s5 = geom::sphere(6);
  const auto samples = s5.sample(64, 11);
  std::vector<double> seq(64), par(64);
  parallel_for(64, 1, [&](int i) { seq[i] = samples.points[i].sum() * samples.points[i][0]; });
  parallel_for(64, 8, [&](int i) { par[i] = samples.points[i].sum() * samples.points[i][0]; });
  for (int i = 0; i < 64; ++i) CHECK(seq[i] == par[i]);
}

TEST_CASE("pfaffian of small skew matrices") {
  Mat A = Mat::Zero(2, 2);
  A(0, 1) = 3.0;
  A(1, 0) = -3.0;
  CHECK(linalg::pfaffian(A) == doctest::Approx(3.0));

  Mat B = Mat::Zero(4, 4);
  auto set = [&](int i, int j, double v) { B(i, j) = v; B(j, i) = -v; };
  set(0, 1, 1.0); set(0, 2, 2.0); set(0, 3, 3.0);
  set(1, 2, 4.0); set(1, 3, 5.0); set(2, 3, 6.0);
  // pf = b01 b23 - b02 b13 + b03 b12
  CHECK(linalg::pfaffian(B) == doctest::Approx(1 * 6 - 2 * 5 + 3 * 4));

  // Pf(A)^2 = det(A) on random skew matrices
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    Mat M = Mat::Zero(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        const double v = rng.normal();
        M(i, j) = v;
        M(j, i) = -v;
      }
    const double pf = linalg::pfaffian(M);
    CHECK(pf * pf == doctest::Approx(M.determinant()).epsilon(1e-9));
  }
}
