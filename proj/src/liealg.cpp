#include "cfb/liealg.hpp"

#include <cmath>

namespace cfb::lie {

Mat matrix_exp(const Mat& A) {
  if (A.size() == 0) return A;
  int squarings = 0;
  Mat B = A;
  while (B.cwiseAbs().sum() > 0.5) {
    B /= 2.0;
    ++squarings;
  }
  Mat term = Mat::Identity(A.rows(), A.cols());
  Mat sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = (term * B) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

namespace {

Vec vectorize(const Mat& M) {
  return Eigen::Map<const Vec>(M.data(), M.size());
}

}  // namespace

MatrixLieGroup::MatrixLieGroup(std::string name, std::vector<Mat> algebra_basis,
                               Mat inner_product)
    : name_(std::move(name)), basis_(std::move(algebra_basis)), inner_(std::move(inner_product)) {
  const int d = dim();
  if (d == 0) return;
  const int m = matrix_dim();
  basis_flat_.resize(m * m, d);
  for (int i = 0; i < d; ++i) basis_flat_.col(i) = vectorize(basis_[static_cast<size_t>(i)]);
  basis_flat_pinv_ = basis_flat_.completeOrthogonalDecomposition().pseudoInverse();

  structure_.assign(static_cast<size_t>(d), Mat::Zero(d, d));
  closure_residual_ = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Mat br = basis_[static_cast<size_t>(i)] * basis_[static_cast<size_t>(j)] -
                     basis_[static_cast<size_t>(j)] * basis_[static_cast<size_t>(i)];
      const Vec c = basis_flat_pinv_ * vectorize(br);
      Mat recon = Mat::Zero(m, m);
      for (int k = 0; k < d; ++k) recon += c[k] * basis_[static_cast<size_t>(k)];
      closure_residual_ = std::max(closure_residual_, (recon - br).cwiseAbs().maxCoeff());
      for (int k = 0; k < d; ++k) structure_[static_cast<size_t>(k)](i, j) = c[k];
    }
  }
}

Mat MatrixLieGroup::algebra(const Vec& coords) const {
  Mat X = Mat::Zero(matrix_dim(), matrix_dim());
  for (int i = 0; i < dim(); ++i) X += coords[i] * basis_[static_cast<size_t>(i)];
  return X;
}

Vec MatrixLieGroup::bracket_coords(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim());
  for (int k = 0; k < dim(); ++k) out[k] = x.dot(structure_[static_cast<size_t>(k)] * y);
  return out;
}

Mat MatrixLieGroup::exp(const Vec& coords, double t) const {
  return matrix_exp(t * algebra(coords));
}

Mat MatrixLieGroup::adjoint_matrix(const Mat& g) const {
  const Mat ginv = g.inverse();
  Mat ad(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    ad.col(i) = basis_flat_pinv_ * vectorize(Mat(g * basis_[static_cast<size_t>(i)] * ginv));
  return ad;
}

CoadjointElement MatrixLieGroup::coadjoint(const Mat& g, const CoadjointElement& mu) const {
  return adjoint_matrix(g.inverse()).transpose() * mu;
}

Mat MatrixLieGroup::isotropy_algebra(const CoadjointElement& mu, double rank_tol) const {
  const int d = dim();
  // K(j, i) = <mu, [X_i, X_j]>
  Mat K(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += mu[k] * structure_[static_cast<size_t>(k)](i, j);
      K(j, i) = s;
    }
  return linalg::null_space(K, rank_tol);
}

Vec MatrixLieGroup::coords_of(const Mat& algebra_element) const {
  return basis_flat_pinv_ * vectorize(algebra_element);
}

Mat MatrixLieGroup::random_element(Rng& rng, double scale) const {
  return exp(scale * rng.normal_vec(dim()));
}

GroupAction::GroupAction(const MatrixLieGroup* group, const geom::EmbeddedManifold* manifold,
                         std::vector<Mat> ambient_generators, ElementRep ambient_of)
    : group_(group),
      manifold_(manifold),
      generators_(std::move(ambient_generators)),
      ambient_of_(std::move(ambient_of)) {}

Mat GroupAction::generator_matrix(const Vec& coords) const {
  Mat G = Mat::Zero(manifold_->ambient_dim(), manifold_->ambient_dim());
  for (int i = 0; i < group_->dim(); ++i) G += coords[i] * generators_[static_cast<size_t>(i)];
  return G;
}

Vec GroupAction::induced_vector_field(const Vec& coords, const Vec& x) const {
  return generator_matrix(coords) * x;
}

forms::VectorFieldEntity GroupAction::induced_field_entity(const Vec& coords) const {
  return forms::VectorFieldEntity(geom::linear_map(generator_matrix(coords)));
}

namespace {

// Rotation generator of plane p (coordinates 2p, 2p+1) in R^(2m).
Mat plane_rotation_generator(int m, int p) {
  Mat J = Mat::Zero(2 * m, 2 * m);
  J(2 * p, 2 * p + 1) = -1.0;
  J(2 * p + 1, 2 * p) = 1.0;
  return J;
}

}  // namespace

MatrixLieGroup torus_group(int n) {
  std::vector<Mat> basis;
  basis.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) basis.push_back(plane_rotation_generator(n, i));
  return {"T^" + std::to_string(n), std::move(basis), Mat::Identity(n, n)};
}

MatrixLieGroup su2_group() {
  using CMat = Eigen::MatrixXcd;
  const std::complex<double> I(0.0, 1.0);
  CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  std::vector<Mat> basis = {complex_to_real(CMat(-0.5 * I * s1)),
                            complex_to_real(CMat(-0.5 * I * s2)),
                            complex_to_real(CMat(-0.5 * I * s3))};
  return {"SU(2)", std::move(basis), Mat::Identity(3, 3)};
}

MatrixLieGroup product_group(const MatrixLieGroup& a, const MatrixLieGroup& b) {
  const int ma = a.matrix_dim(), mb = b.matrix_dim();
  std::vector<Mat> basis;
  for (const Mat& X : a.basis()) {
    Mat B = Mat::Zero(ma + mb, ma + mb);
    B.topLeftCorner(ma, ma) = X;
    basis.push_back(std::move(B));
  }
  for (const Mat& X : b.basis()) {
    Mat B = Mat::Zero(ma + mb, ma + mb);
    B.bottomRightCorner(mb, mb) = X;
    basis.push_back(std::move(B));
  }
  Mat inner = Mat::Zero(a.dim() + b.dim(), a.dim() + b.dim());
  inner.topLeftCorner(a.dim(), a.dim()) = a.inner_product();
  inner.bottomRightCorner(b.dim(), b.dim()) = b.inner_product();
  return {a.name() + "x" + b.name(), std::move(basis), std::move(inner)};
}

MatrixLieGroup trivial_group() { return {"1", {}, Mat(0, 0)}; }

GroupAction trivial_action(const MatrixLieGroup* triv, const geom::EmbeddedManifold* M) {
  const int N = M->ambient_dim();
  return {triv, M, {}, [N](const Mat&) { return Mat::Identity(N, N); }};
}

GroupAction torus_action(const MatrixLieGroup* torus, const geom::EmbeddedManifold* M,
                         const Eigen::MatrixXi& weights,
                         std::vector<std::array<int, 2>> planes) {
  const int n = torus->dim();
  const int N = M->ambient_dim();
  if (planes.empty())
    for (int p = 0; 2 * p + 1 < N; ++p) planes.push_back({2 * p, 2 * p + 1});
  std::vector<Mat> gens;
  gens.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Mat G = Mat::Zero(N, N);
    for (size_t p = 0; p < planes.size(); ++p)
      if (weights(i, static_cast<int>(p)) != 0) {
        G(planes[p][0], planes[p][1]) -= weights(i, static_cast<int>(p));
        G(planes[p][1], planes[p][0]) += weights(i, static_cast<int>(p));
      }
    gens.push_back(std::move(G));
  }
  // Canonical torus elements are block rotations; read the angles and expose
  // the weighted ambient rotation.
  auto ambient_of = [gens, n](const Mat& g) {
    Mat sum = Mat::Zero(gens[0].rows(), gens[0].cols());
    for (int i = 0; i < n; ++i) {
      const double theta = std::atan2(g(2 * i + 1, 2 * i), g(2 * i, 2 * i));
      sum += theta * gens[static_cast<size_t>(i)];
    }
    return matrix_exp(sum);
  };
  return {torus, M, std::move(gens), std::move(ambient_of)};
}

GroupAction su2_action_s3(const MatrixLieGroup* su2, const geom::EmbeddedManifold* s3) {
  return {su2, s3, su2->basis(), [](const Mat& g) { return g; }};
}

GroupAction su2_action_first_two(const MatrixLieGroup* su2, const geom::EmbeddedManifold* M) {
  auto embed = [](const Mat& four) {
    Mat out = Mat::Identity(6, 6);
    out.topLeftCorner(4, 4) = four;
    return out;
  };
  std::vector<Mat> gens;
  for (const Mat& X : su2->basis()) {
    Mat G = Mat::Zero(6, 6);
    G.topLeftCorner(4, 4) = X;
    gens.push_back(std::move(G));
  }
  return {su2, M, std::move(gens), embed};
}

Mat complex_to_real(const Eigen::MatrixXcd& U) {
  const int m = static_cast<int>(U.rows());
  Mat R(2 * m, 2 * m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      R(2 * j, 2 * k) = U(j, k).real();
      R(2 * j, 2 * k + 1) = -U(j, k).imag();
      R(2 * j + 1, 2 * k) = U(j, k).imag();
      R(2 * j + 1, 2 * k + 1) = U(j, k).real();
    }
  return R;
}

}  // namespace cfb::lie
