#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "cfb/forms.hpp"
#include "test_util.hpp"

using namespace cfb;
using forms::OneFormField;
using forms::VectorFieldEntity;
using geom::EmbeddedManifold;
using geom::Jet;
using geom::JetVec;
using geom::SmoothMap;

namespace {

// Independent oracle: alpha ^ (dalpha)^m evaluated on n = 2m+1 frame vectors
// by full antisymmetrization. Equals m! times the bordered Pfaffian.
double top_wedge(const OneFormField& alpha, const Vec& p, const Mat& frame) {
  const int n = static_cast<int>(frame.cols());
  const int m = (n - 1) / 2;
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0.0;
  do {
    // permutation sign by counting inversions
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (idx[i] > idx[j]) ++inv;
    double term = (inv % 2 == 0 ? 1.0 : -1.0) * alpha(p, frame.col(idx[0]));
    for (int k = 0; k < m; ++k)
      term *= forms::eval_d(alpha, p, frame.col(idx[1 + 2 * k]), frame.col(idx[2 + 2 * k]));
    sum += term;
  } while (std::next_permutation(idx.begin(), idx.end()));
  double mfact = 1.0;
  for (int k = 2; k <= m; ++k) mfact *= k;  // m!
  double pairs = 1.0;
  for (int k = 0; k < m; ++k) pairs *= 2.0;  // (2!)^m
  // wedge value is sum / (2!)^m and equals m! * Pf; return the Pf-normalized value
  return sum / (pairs * mfact);
}

}  // namespace

TEST_CASE("eval_d on closed-form examples") {
  const OneFormField alpha = forms::standard_form_r2n1(1);  // dz - y dx on R^3
  Rng rng(2);
  const Vec ex = Vec::Unit(3, 0), ey = Vec::Unit(3, 1);
  for (int t = 0; t < 5; ++t) {
    const Vec p = rng.normal_vec(3);
    CHECK(forms::eval_d(alpha, p, ex, ey) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // alpha = x dy
  const OneFormField xdy(SmoothMap(2, 2, [](const JetVec& x) {
    return JetVec{Jet(0.0), x[0]};
  }));
  CHECK(forms::eval_d(xdy, rng.normal_vec(2), Vec::Unit(2, 0), Vec::Unit(2, 1)) ==
        doctest::Approx(1.0));
}

TEST_CASE("d of an exact form vanishes") {
  // f = x^2 + y, df = (2x, 1, 0)
  const OneFormField df(SmoothMap(3, 3, [](const JetVec& x) {
    return JetVec{Jet(2.0) * x[0], Jet(1.0), Jet(0.0)};
  }));
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const Vec p = rng.normal_vec(3), u = rng.normal_vec(3), v = rng.normal_vec(3);
    CHECK(std::abs(forms::eval_d(df, p, u, v)) <= 1e-12);
  }
}

TEST_CASE("d(df) = 0 for randomized scalar fields") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    auto field = testutil::random_scalar_field(rng, 4, 5);
    const OneFormField df = forms::exact_form(field.grad);
    for (int s = 0; s < 5; ++s) {
      const Vec p = rng.normal_vec(4), u = rng.normal_vec(4), v = rng.normal_vec(4);
      CHECK(std::abs(forms::eval_d(df, p, u, v)) <= 1e-9);
    }
  }
}

TEST_CASE("eval_d is antisymmetric and bilinear") {
  Rng rng(23);
  const OneFormField alpha = testutil::random_oneform(rng, 4);
  for (int t = 0; t < 20; ++t) {
    const Vec p = rng.normal_vec(4), u = rng.normal_vec(4), v = rng.normal_vec(4),
              w = rng.normal_vec(4);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const double duv = forms::eval_d(alpha, p, u, v);
    CHECK(forms::eval_d(alpha, p, v, u) == doctest::Approx(-duv).epsilon(1e-12));
    CHECK(forms::eval_d(alpha, p, a * u + b * w, v) ==
          doctest::Approx(a * duv + b * forms::eval_d(alpha, p, w, v)).epsilon(1e-10));
  }
}

TEST_CASE("lie bracket closed forms") {
  // constant coordinate fields commute
  const VectorFieldEntity ex(geom::linear_map(Mat::Zero(2, 2)));
  SUBCASE("constants") {
    Rng rng(1);
    const VectorFieldEntity c1(SmoothMap(2, 2, [](const JetVec&) {
      return JetVec{Jet(1.0), Jet(0.0)};
    }));
    const VectorFieldEntity c2(SmoothMap(2, 2, [](const JetVec&) {
      return JetVec{Jet(0.0), Jet(1.0)};
    }));
    CHECK(forms::lie_bracket(c1, c2, rng.normal_vec(2)).norm() <= 1e-14);
  }

  SUBCASE("x d/dy against y d/dx") {
    const VectorFieldEntity X(SmoothMap(2, 2, [](const JetVec& x) {
      return JetVec{Jet(0.0), x[0]};
    }));
    const VectorFieldEntity Y(SmoothMap(2, 2, [](const JetVec& x) {
      return JetVec{x[1], Jet(0.0)};
    }));
    const Vec p = (Vec(2) << 0.7, -0.3).finished();
    const Vec br = forms::lie_bracket(X, Y, p);
    CHECK(br[0] == doctest::Approx(p[0]).epsilon(1e-12));
    CHECK(br[1] == doctest::Approx(-p[1]).epsilon(1e-12));
  }

  SUBCASE("rotations of distinct planes commute") {
    Mat J1 = Mat::Zero(4, 4), J2 = Mat::Zero(4, 4);
    J1(0, 1) = -1; J1(1, 0) = 1;
    J2(2, 3) = -1; J2(3, 2) = 1;
    const VectorFieldEntity X(geom::linear_map(J1)), Y(geom::linear_map(J2));
    Rng rng(9);
    CHECK(forms::lie_bracket(X, Y, rng.normal_vec(4)).norm() <= 1e-13);
  }

  SUBCASE("jet path matches FD path") {
    Rng rng(31);
    const SmoothMap m1 = testutil::random_vector_map(rng, 3);
    const SmoothMap m2 = testutil::random_vector_map(rng, 3);
    const VectorFieldEntity Xj(m1), Yj(m2);
    const VectorFieldEntity Xv(3, [m1](const Vec& x) { return m1.value(x); });
    const VectorFieldEntity Yv(3, [m2](const Vec& x) { return m2.value(x); });
    for (int t = 0; t < 5; ++t) {
      const Vec p = rng.normal_vec(3);
      const Vec exact = forms::lie_bracket(Xj, Yj, p);
      const Vec fd = forms::lie_bracket(Xv, Yv, p);
      CHECK((exact - fd).norm() <= 1e-8 * (1.0 + exact.norm()));
    }
  }
}

TEST_CASE("bordered pfaffian expands correctly in dimension 3") {
  const OneFormField alpha = forms::standard_form_r2n1(1);
  const EmbeddedManifold r3 = geom::euclidean_space(3);
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    CHECK(forms::contact_pfaffian(alpha, r3, rng.normal_vec(3)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  // alpha = dz is nowhere contact
  const OneFormField dz(SmoothMap(3, 3, [](const JetVec&) {
    return JetVec{Jet(0.0), Jet(0.0), Jet(1.0)};
  }));
  CHECK(std::abs(forms::contact_pfaffian(dz, r3, rng.normal_vec(3))) <= 1e-15);
}

TEST_CASE("bordered pfaffian equals the antisymmetrized top wedge (oracle)") {
  Rng rng(8);
  SUBCASE("dimension 3, m! = 1") {
    const OneFormField alpha = testutil::random_oneform(rng, 3);
    for (int t = 0; t < 5; ++t) {
      const Vec p = rng.normal_vec(3);
      const Mat frame = Mat::Identity(3, 3);
      const double wedge = top_wedge(alpha, p, frame);
      const double pf = forms::bordered_pfaffian(alpha, p, frame);
      CHECK(wedge == doctest::Approx(pf).epsilon(1e-9));
    }
  }
  SUBCASE("dimension 5, m! = 2") {
    const OneFormField alpha = testutil::random_oneform(rng, 5);
    for (int t = 0; t < 3; ++t) {
      const Vec p = rng.normal_vec(5);
      const Mat frame = Mat::Identity(5, 5);
      const double wedge = top_wedge(alpha, p, frame);
      const double pf = forms::bordered_pfaffian(alpha, p, frame);
      CHECK(wedge == doctest::Approx(pf).epsilon(1e-9));
    }
  }
}

TEST_CASE("|Pf| is invariant under orthonormal frame re-gauging") {
  Rng rng(14);
  const EmbeddedManifold s3 = geom::sphere(4);
  const OneFormField alpha = forms::standard_form_cn(2);
  const auto samples = s3.sample(20, 5);
  for (const Vec& p : samples.points) {
    const Mat frame = s3.tangent_frame(p).columns;
    const double pf0 = std::abs(forms::bordered_pfaffian(alpha, p, frame));
    // random orthonormal re-gauge
    const Mat G = Mat::NullaryExpr(3, 3, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
    const Eigen::HouseholderQR<Mat> qr(G);
    const Mat Q = qr.householderQ();
    const double pf1 = std::abs(forms::bordered_pfaffian(alpha, p, frame * Q));
    CHECK(pf1 == doctest::Approx(pf0).epsilon(1e-9));
  }
}

TEST_CASE("standard form on S3 has constant pfaffian magnitude 8") {
  const EmbeddedManifold s3 = geom::sphere(4);
  const OneFormField alpha = forms::standard_form_cn(2);
  const auto samples = s3.sample(1000, 42);
  double lo = 1e300, hi = 0;
  for (const Vec& p : samples.points) {
    const double pf = std::abs(forms::contact_pfaffian(alpha, s3, p));
    lo = std::min(lo, pf);
    hi = std::max(hi, pf);
  }
  CHECK(lo >= 8.0 - 1e-8);
  CHECK(hi <= 8.0 + 1e-8);
}

TEST_CASE("reeb field closed forms") {
  SUBCASE("dz - y dx has Reeb e_z") {
    const OneFormField alpha = forms::standard_form_r2n1(1);
    const EmbeddedManifold r3 = geom::euclidean_space(3);
    Rng rng(6);
    for (int t = 0; t < 5; ++t) {
      const Vec R = forms::reeb(alpha, r3, rng.normal_vec(3));
      CHECK((R - Vec::Unit(3, 2)).norm() <= 1e-12);
    }
  }

  SUBCASE("S3 Reeb is iz/2") {
    const EmbeddedManifold s3 = geom::sphere(4);
    const OneFormField alpha = forms::standard_form_cn(2);
    for (const Vec& p : s3.sample(25, 3).points) {
      Vec iz(4);
      iz << -p[1], p[0], -p[3], p[2];
      const Vec R = forms::reeb(alpha, s3, p);
      CHECK((R - 0.5 * iz).norm() <= 1e-9);
    }
  }

  SUBCASE("ellipsoid Reeb is a constant combination a_j/2 of plane rotations") {
    const Vec a = (Vec(3) << 1, 2, 3).finished();
    const EmbeddedManifold e = geom::ellipsoid(a);
    const OneFormField alpha = forms::standard_form_cn(3);
    for (const Vec& p : e.sample(10, 4).points) {
      const Vec R = forms::reeb(alpha, e, p);
      // coefficients against the rotation fields, solved pointwise
      Mat rot(6, 3);
      for (int j = 0; j < 3; ++j) {
        Vec v = Vec::Zero(6);
        v[2 * j] = -p[2 * j + 1];
        v[2 * j + 1] = p[2 * j];
        rot.col(j) = v;
      }
      const Vec coef = rot.colPivHouseholderQr().solve(R);
      CHECK((rot * coef - R).norm() <= 1e-9);  // R lies in the rotation span
      for (int j = 0; j < 3; ++j) CHECK(coef[j] == doctest::Approx(a[j] / 2).epsilon(1e-8));
    }
  }
}

TEST_CASE("cartan identity holds for random fields") {
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    const OneFormField alpha = testutil::random_oneform(rng, 3);
    const VectorFieldEntity X = testutil::random_field(rng, 3);
    const VectorFieldEntity Y = testutil::random_field(rng, 3);
    for (int s = 0; s < 5; ++s) {
      const Vec p = rng.normal_vec(3);
      const double lhs = forms::eval_d(alpha, p, X(p), Y(p));
      const double rhs = forms::derive_alpha_of_field(alpha, Y, p, X(p)) -
                         forms::derive_alpha_of_field(alpha, X, p, Y(p)) -
                         alpha(p, forms::lie_bracket(X, Y, p));
      CHECK(std::abs(lhs - rhs) <= 1e-7 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("lie derivative of invariant tensors vanishes") {
  SUBCASE("round metric on S2 under a rotation field") {
    const EmbeddedManifold s2 = geom::sphere(3);
    Mat J = Mat::Zero(3, 3);
    J(0, 1) = -1;
    J(1, 0) = 1;
    const VectorFieldEntity rot(geom::linear_map(J));
    const forms::MetricField g = [](const Vec&) { return Mat::Identity(3, 3); };
    for (const Vec& p : s2.sample(5, 7).points) {
      const Mat U = s2.tangent_frame(p).columns;
      const Mat L = forms::lie_derivative_metric(g, rot, p, U, 1e-3, &s2);
      CHECK(L.cwiseAbs().maxCoeff() <= 1e-6);
    }
  }

  SUBCASE("standard contact form on S3 under its Reeb flow") {
    const EmbeddedManifold s3 = geom::sphere(4);
    const OneFormField alpha = forms::standard_form_cn(2);
    const VectorFieldEntity R = forms::reeb_field(alpha, s3);
    for (const Vec& p : s3.sample(5, 8).points) {
      const Mat U = s3.tangent_frame(p).columns;
      const Vec L = forms::lie_derivative_oneform(alpha, R, p, U, 1e-3, &s3);
      CHECK(L.cwiseAbs().maxCoeff() <= 1e-6);
    }
  }

  SUBCASE("euclidean metric on R2 under x d/dx gives 2 dx dx") {
    const EmbeddedManifold r2 = geom::euclidean_space(2);
    const VectorFieldEntity X(SmoothMap(2, 2, [](const JetVec& x) {
      return JetVec{x[0], Jet(0.0)};
    }));
    const forms::MetricField g = [](const Vec&) { return Mat::Identity(2, 2); };
    Rng rng(21);
    const Vec p = rng.normal_vec(2);
    const Mat L = forms::lie_derivative_metric(g, X, p, Mat::Identity(2, 2), 1e-3);
    CHECK(L(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(std::abs(L(0, 1)) <= 1e-6);
    CHECK(std::abs(L(1, 1)) <= 1e-6);
  }
}
