#include <doctest.h>

#include "cfb/contact.hpp"
#include "cfb/liealg.hpp"

using namespace cfb;
using geom::EmbeddedManifold;
using lie::GroupAction;
using lie::MatrixLieGroup;

TEST_CASE("torus exponential closes after a full turn") {
  const MatrixLieGroup t1 = lie::torus_group(1);
  const Mat g = t1.exp((Vec(1) << 1.0).finished(), 2 * M_PI);
  CHECK((g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("su(2) spin double cover: exp(2 pi X3) = -1") {
  const MatrixLieGroup su2 = lie::su2_group();
  const Mat g = su2.exp(Vec::Unit(3, 2), 2 * M_PI);
  CHECK((g + Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("one-parameter subgroup property") {
  const MatrixLieGroup su2 = lie::su2_group();
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Vec X = rng.normal_vec(3);
    const double s = rng.uniform(-2, 2), u = rng.uniform(-2, 2);
    const Mat lhs = su2.exp(X, s) * su2.exp(X, u);
    const Mat rhs = su2.exp(X, s + u);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    // group elements are special orthogonal in the real representation
    const Mat g = su2.exp(X, s);
    CHECK((g.transpose() * g - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("structure constants: closure, antisymmetry, jacobi") {
  for (const MatrixLieGroup& G : {lie::su2_group(), lie::torus_group(2),
                                  lie::product_group(lie::torus_group(1), lie::su2_group())}) {
    CHECK(G.closure_residual() <= 1e-12);
    const auto& c = G.structure_constants();
    const int d = G.dim();
    for (int k = 0; k < d; ++k)
      CHECK((c[k] + c[k].transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    // jacobi identity on coordinates
    Rng rng(2);
    for (int t = 0; t < 5; ++t) {
      const Vec x = rng.normal_vec(d), y = rng.normal_vec(d), z = rng.normal_vec(d);
      const Vec j = G.bracket_coords(x, G.bracket_coords(y, z)) +
                    G.bracket_coords(y, G.bracket_coords(z, x)) +
                    G.bracket_coords(z, G.bracket_coords(x, y));
      CHECK(j.cwiseAbs().maxCoeff() <= 1e-12 * (1 + x.norm() * y.norm() * z.norm()));
    }
  }
}

TEST_CASE("su(2) bracket matches epsilon structure") {
  const MatrixLieGroup su2 = lie::su2_group();
  const Vec b12 = su2.bracket_coords(Vec::Unit(3, 0), Vec::Unit(3, 1));
  CHECK((b12 - Vec::Unit(3, 2)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("inner product is ad-invariant") {
  for (const MatrixLieGroup& G : {lie::su2_group(), lie::torus_group(3)}) {
    const int d = G.dim();
    const Mat& ip = G.inner_product();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const Vec zi = Vec::Unit(d, i), xj = Vec::Unit(d, j), yk = Vec::Unit(d, k);
          const double lhs = G.bracket_coords(zi, xj).dot(ip * yk);
          const double rhs = xj.dot(ip * G.bracket_coords(zi, yk));
          CHECK(std::abs(lhs + rhs) <= 1e-10);
        }
  }
}

TEST_CASE("induced vector fields of diagonal circle actions") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const MatrixLieGroup t1 = lie::torus_group(1);
  Eigen::MatrixXi w(1, 2);
  w << 1, 1;
  const GroupAction act = lie::torus_action(&t1, &s3, w);
  for (const Vec& p : s3.sample(10, 6).points) {
    const Vec v = act.induced_vector_field((Vec(1) << 1.0).finished(), p);
    Vec iz(4);
    iz << -p[1], p[0], -p[3], p[2];
    CHECK((v - iz).norm() <= 1e-13);
  }
}

TEST_CASE("T^2 basis generator rotates only its own plane") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const MatrixLieGroup t2 = lie::torus_group(2);
  Eigen::MatrixXi w(2, 2);
  w << 1, 0, 0, 1;
  const GroupAction act = lie::torus_action(&t2, &s3, w);
  const Vec p = s3.sample(1, 7).points[0];
  const Vec v = act.induced_vector_field(Vec::Unit(2, 0), p);
  CHECK(v[0] == doctest::Approx(-p[1]).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(p[0]).epsilon(1e-14));
  CHECK(std::abs(v[2]) <= 1e-14);
  CHECK(std::abs(v[3]) <= 1e-14);
}

TEST_CASE("isotropy directions induce the zero field at fixed points") {
  // SU(2) acts on the first two complex coordinates of C^3; the z3 circle is
  // pointwise fixed.
  const EmbeddedManifold s5 = geom::sphere(6);
  const MatrixLieGroup su2 = lie::su2_group();
  const GroupAction act = lie::su2_action_first_two(&su2, &s5);
  Vec p = Vec::Zero(6);
  p[4] = 1.0;  // z3 = 1
  Rng rng(3);
  for (int t = 0; t < 5; ++t)
    CHECK(act.induced_vector_field(rng.normal_vec(3), p).norm() <= 1e-14);
}

TEST_CASE("induced field matches the exp-curve derivative and is linear in X") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const MatrixLieGroup su2 = lie::su2_group();
  const GroupAction act = lie::su2_action_s3(&su2, &s3);
  Rng rng(9);
  const double h = 1e-6;
  for (int t = 0; t < 10; ++t) {
    const Vec X = rng.normal_vec(3);
    const Vec p = s3.sample(1, 100 + static_cast<uint64_t>(t)).points[0];
    const Vec v = act.induced_vector_field(X, p);
    const Vec fd = (act.apply(su2.exp(X, h), p) - act.apply(su2.exp(X, -h), p)) / (2 * h);
    CHECK((v - fd).norm() <= 1e-8);
    // tangency and linearity
    CHECK(std::abs(s3.constraint_jacobian(p).row(0).dot(v)) <= 1e-12);
    const Vec Y = rng.normal_vec(3);
    const Vec sum = act.induced_vector_field(X + Y, p);
    CHECK((sum - v - act.induced_vector_field(Y, p)).norm() <= 1e-13);
  }
}

TEST_CASE("bracket anti-homomorphism for left actions") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const MatrixLieGroup su2 = lie::su2_group();
  const GroupAction act = lie::su2_action_s3(&su2, &s3);
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const Vec X = rng.normal_vec(3), Y = rng.normal_vec(3);
    const Vec p = s3.sample(1, 200 + static_cast<uint64_t>(t)).points[0];
    const Vec lhs = forms::lie_bracket(act.induced_field_entity(X), act.induced_field_entity(Y), p);
    const Vec rhs = -act.induced_vector_field(su2.bracket_coords(X, Y), p);
    CHECK((lhs - rhs).norm() <= 1e-7);
  }
}

TEST_CASE("action axioms hold on samples") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const MatrixLieGroup su2 = lie::su2_group();
  const GroupAction act = lie::su2_action_s3(&su2, &s3);
  Rng rng(15);
  for (const Vec& p : s3.sample(5, 16).points) {
    CHECK((act.apply(Mat::Identity(4, 4), p) - p).norm() <= 1e-14);
    const Mat g = su2.random_element(rng), h = su2.random_element(rng);
    CHECK((act.apply(g * h, p) - act.apply(g, act.apply(h, p))).norm() <= 1e-10);
    CHECK(s3.residual(act.apply(g, p)) <= 1e-10);
  }

  // torus action axiom exercises the angle-extraction representation
  const MatrixLieGroup t2 = lie::torus_group(2);
  Eigen::MatrixXi w(2, 2);
  w << 1, 0, 0, 1;
  const GroupAction ta = lie::torus_action(&t2, &s3, w);
  for (const Vec& p : s3.sample(5, 17).points) {
    const Mat g = t2.random_element(rng), h = t2.random_element(rng);
    CHECK((ta.apply(g * h, p) - ta.apply(g, ta.apply(h, p))).norm() <= 1e-10);
  }
}

TEST_CASE("isotropy algebras of coadjoint elements") {
  SUBCASE("torus: everything is isotropy") {
    const MatrixLieGroup t2 = lie::torus_group(2);
    CHECK(t2.isotropy_algebra((Vec(2) << 0.3, -1.0).finished()).cols() == 2);
  }
  SUBCASE("su(2) at e3*: the X3 line") {
    const MatrixLieGroup su2 = lie::su2_group();
    const Mat iso = su2.isotropy_algebra(Vec::Unit(3, 2));
    REQUIRE(iso.cols() == 1);
    CHECK(std::abs(std::abs(iso(2, 0)) - 1.0) <= 1e-12);
    CHECK(std::abs(iso(0, 0)) <= 1e-12);
    CHECK(std::abs(iso(1, 0)) <= 1e-12);
  }
  SUBCASE("su(2) at zero: everything") {
    CHECK(lie::su2_group().isotropy_algebra(Vec::Zero(3)).cols() == 3);
  }
}

TEST_CASE("coadjoint action properties") {
  const MatrixLieGroup su2 = lie::su2_group();
  Rng rng(20);
  const Vec mu = rng.normal_vec(3);
  CHECK((su2.coadjoint(Mat::Identity(4, 4), mu) - mu).norm() <= 1e-13);

  // defining property <Ad'(g) mu, X> = <mu, Ad(g^-1) X>
  for (int t = 0; t < 5; ++t) {
    const Mat g = su2.random_element(rng);
    const Vec ad_mu = su2.coadjoint(g, mu);
    const Vec X = rng.normal_vec(3);
    const double lhs = ad_mu.dot(X);
    const double rhs = mu.dot(su2.adjoint_matrix(g.inverse()) * X);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    // orbits are spheres: the invariant norm is preserved
    CHECK(ad_mu.norm() == doctest::Approx(mu.norm()).epsilon(1e-10));
  }

  // torus coadjoint action is trivial
  const MatrixLieGroup t2 = lie::torus_group(2);
  const Vec nu = rng.normal_vec(2);
  CHECK((t2.coadjoint(t2.random_element(rng), nu) - nu).norm() <= 1e-12);
}
