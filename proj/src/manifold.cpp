#include "cfb/manifold.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <utility>

namespace cfb {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CFB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace linalg {

Mat null_space(const Mat& A, double rank_tol) {
  if (A.rows() == 0) return Mat::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * smax) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

Mat orthonormalize(const Mat& A, double rank_tol) {
  if (A.cols() == 0) return A;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * smax) ++rank;
  return svd.matrixU().leftCols(rank);
}

double max_principal_angle(const Mat& Q1, const Mat& Q2) {
  if (Q1.cols() == 0 && Q2.cols() == 0) return 0.0;
  // sine-based formulation: accurate near zero, unlike acos of sigma_min
  const Mat R = Q2 - Q1 * (Q1.transpose() * Q2);
  Eigen::JacobiSVD<Mat> svd(R);
  const double s = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
  return std::asin(s);
}

double pfaffian(Mat A) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  double result = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    // pivot: largest |A(i,k)| among i > k
    int kp = k + 1;
    for (int i = k + 2; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(kp, k))) kp = i;
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      result = -result;
    }
    const double pivot = A(k, k + 1);
    if (pivot == 0.0) return 0.0;
    result *= pivot;
    if (k + 2 < n) {
      const Vec tau = A.row(k).segment(k + 2, n - k - 2) / pivot;
      const Vec col = A.col(k + 1).segment(k + 2, n - k - 2);
      auto block = A.block(k + 2, k + 2, n - k - 2, n - k - 2);
      block += tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

Mat sym_sqrt(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  Vec ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(ev[i], 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace linalg

namespace geom {

EmbeddedManifold::EmbeddedManifold(std::string name, SmoothMap constraint,
                                   double constraint_tol, double rank_tol)
    : name_(std::move(name)),
      constraint_(std::move(constraint)),
      ambient_dim_(constraint_.in_dim()),
      codim_(constraint_.out_dim()),
      constraint_tol_(constraint_tol),
      rank_tol_(rank_tol) {}

double EmbeddedManifold::residual(const Vec& x) const {
  if (codim_ == 0) return 0.0;
  return constraint_.value(x).cwiseAbs().maxCoeff();
}

Mat EmbeddedManifold::constraint_jacobian(const Vec& x) const {
  if (codim_ == 0) return Mat(0, ambient_dim_);
  return constraint_.jacobian(x);
}

bool EmbeddedManifold::contains(const Vec& x) const {
  return residual(x) <= constraint_tol_;
}

Vec EmbeddedManifold::retract(const Vec& q, int max_iter) const {
  if (codim_ == 0) return q;
  Vec x = q;
  for (int it = 0; it < max_iter; ++it) {
    auto [c, J] = constraint_.eval(x);
    if (c.cwiseAbs().maxCoeff() <= constraint_tol_) return x;
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= rank_tol_ * sv[0])
      throw RankDeficient("constraint Jacobian lost rank during retraction of " + name_);
    x -= svd.solve(c);
  }
  throw NonConvergence("retraction onto " + name_ + " did not reach tolerance");
}

TangentFrame EmbeddedManifold::tangent_frame(const Vec& p) const {
  if (codim_ == 0) return {p, Mat::Identity(ambient_dim_, ambient_dim_)};
  const Mat J = constraint_jacobian(p);
  Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= rank_tol_ * sv[0])
    throw RankDeficient("constraint Jacobian rank-deficient on " + name_);
  return {p, svd.matrixV().rightCols(dim())};
}

SampleSet EmbeddedManifold::sample(int count, uint64_t seed) const {
  SampleSet out;
  out.seed = seed;
  out.points.reserve(static_cast<size_t>(count));
  Rng rng(seed);
  const int budget = 100 * count + 100;
  int attempts = 0;
  while (static_cast<int>(out.points.size()) < count) {
    if (++attempts > budget)
      throw NonConvergence("sampling " + name_ + " kept failing to retract; bad basin configuration");
    const Vec q = rng.normal_vec(ambient_dim_);
    try {
      out.points.push_back(retract(q));
    } catch (const Error&) {
      continue;  // rejected draw
    }
  }
  return out;
}

EmbeddedManifold product_manifold(const std::string& name,
                                  const EmbeddedManifold& a,
                                  const EmbeddedManifold& b) {
  const int na = a.ambient_dim(), nb = b.ambient_dim();
  const int ka = a.codim(), kb = b.codim();
  SmoothMap ca = a.constraint(), cb = b.constraint();
  SmoothMap stacked(na + nb, ka + kb, [ca, cb, na, nb, ka, kb](const JetVec& x) {
    JetVec xa(x.begin(), x.begin() + na);
    JetVec xb(x.begin() + na, x.begin() + na + nb);
    JetVec out;
    out.reserve(static_cast<size_t>(ka + kb));
    if (ka) { JetVec va = ca(xa); out.insert(out.end(), va.begin(), va.end()); }
    if (kb) { JetVec vb = cb(xb); out.insert(out.end(), vb.begin(), vb.end()); }
    return out;
  });
  return {name, std::move(stacked),
          std::min(a.constraint_tol(), b.constraint_tol()),
          std::min(a.rank_tol(), b.rank_tol())};
}

EmbeddedManifold euclidean_space(int n) {
  return {"R^" + std::to_string(n), SmoothMap(n, 0, [](const JetVec&) { return JetVec{}; })};
}

EmbeddedManifold ellipsoid(const Vec& a) {
  const int n = static_cast<int>(a.size());
  SmoothMap c(2 * n, 1, [a, n](const JetVec& x) {
    Jet s(-1.0);
    for (int j = 0; j < n; ++j)
      s += Jet(a[j]) * (sqr(x[static_cast<size_t>(2 * j)]) + sqr(x[static_cast<size_t>(2 * j + 1)]));
    return JetVec{s};
  });
  std::string name = "E_(";
  for (int j = 0; j < n; ++j) name += (j ? "," : "") + std::to_string(a[j]);
  name += ")";
  return {std::move(name), std::move(c)};
}

EmbeddedManifold sphere(int ambient_dim) {
  SmoothMap c(ambient_dim, 1, [ambient_dim](const JetVec& x) {
    Jet s(-1.0);
    for (int i = 0; i < ambient_dim; ++i) s += sqr(x[static_cast<size_t>(i)]);
    return JetVec{s};
  });
  return {"S^" + std::to_string(ambient_dim - 1), std::move(c)};
}

}  // namespace geom
}  // namespace cfb
