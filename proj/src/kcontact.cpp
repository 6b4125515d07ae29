#include "cfb/kcontact.hpp"

#include <Eigen/Cholesky>

namespace cfb::kcontact {

namespace {

struct PolarData {
  Mat metric;  // ambient bilinear matrix
  Mat J;       // ambient complex structure on xi
  Vec reeb;
};

// Pointwise polar construction over a given frame. Everything is covariant
// under orthonormal re-gauging of the frame, so the outputs are gauge-free.
PolarData polar_metric(const OneFormField& alpha, const Vec& x, const Mat& F,
                       const MetricField& background) {
  const int n = static_cast<int>(F.cols());
  const Vec a = alpha.on_frame(x, F);
  const Mat W = forms::d_on_frame(alpha, x, F);
  const Vec r_coords = [&] {
    Mat A(n + 1, n);
    A.row(0) = a.transpose();
    A.bottomRows(n) = W;
    Vec rhs = Vec::Zero(n + 1);
    rhs[0] = 1.0;
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec r = svd.solve(rhs);
    if ((A * r - rhs).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, W.cwiseAbs().maxCoeff()))
      throw DegenerateContact("no Reeb direction: form is degenerate at the metric point");
    return r;
  }();

  const Mat Qxi = linalg::null_space(a.transpose(), 1e-12);  // n x (n-1)
  const Mat Wxi = Qxi.transpose() * W * Qxi;
  Mat bxi;
  if (background) {
    const Mat Bg = F.transpose() * background(x) * F;
    bxi = Qxi.transpose() * Bg * Qxi;
  } else {
    bxi = Mat::Identity(n - 1, n - 1);
  }
  Eigen::LLT<Mat> llt(bxi);
  if (llt.info() != Eigen::Success)
    throw PolarBreakdown("background metric is not positive definite on xi");
  const Mat L = llt.matrixL();
  const Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(n - 1, n - 1));
  const Mat Wt = Linv * Wxi * Linv.transpose();
  const Mat St = linalg::sym_sqrt(Wt.transpose() * Wt);
  Eigen::SelfAdjointEigenSolver<Mat> es(St);
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(es.eigenvalues().maxCoeff(), 1e-300))
    throw PolarBreakdown("dalpha degenerates on xi; polar factor is singular");
  const Mat St_inv = es.operatorInverseSqrt() * es.operatorInverseSqrt();
  // with omega(u,v) = u^T W v and b orthonormal: G = S, J = S^{-1} W
  const Mat Jt = St_inv * Wt;

  const Mat g_xi = L * St * L.transpose();                 // metric on xi coordinates
  const Mat J_xi = Linv.transpose() * Jt * L.transpose();  // operator on xi coordinates

  // frame-coordinate metric from the splitting span(reeb) + xi
  Mat K(n, n);
  K.col(0) = r_coords;
  K.rightCols(n - 1) = Qxi;
  const Mat Kinv = K.inverse();
  Mat D = Mat::Zero(n, n);
  D(0, 0) = 1.0;
  D.bottomRightCorner(n - 1, n - 1) = g_xi;
  const Mat G_frame = Kinv.transpose() * D * Kinv;

  PolarData out;
  out.metric = F * G_frame * F.transpose();
  out.J = (F * Qxi) * J_xi * (F * Qxi).transpose();
  out.reeb = F * r_coords;
  return out;
}

CompatibleMetricField make_field(const EmbeddedManifold* space, const OneFormField& alpha,
                                 std::function<Mat(const Vec&)> frame, MetricField background) {
  CompatibleMetricField out;
  out.space = space;
  out.alpha = alpha;
  out.frame = frame;
  out.metric = [alpha, frame, background](const Vec& x) {
    return polar_metric(alpha, x, frame(x), background).metric;
  };
  out.complex_structure = [alpha, frame, background](const Vec& x) {
    return polar_metric(alpha, x, frame(x), background).J;
  };
  out.reeb = VectorFieldEntity(space->ambient_dim(), [alpha, frame](const Vec& x) {
    return forms::reeb_in_frame(alpha, x, frame(x), 1e-6);
  });
  return out;
}

}  // namespace

CompatibleMetricField build_compatible_metric(const EmbeddedManifold& M,
                                              const OneFormField& alpha,
                                              MetricField background) {
  auto frame = [&M](const Vec& x) {
    return M.codim() ? linalg::null_space(M.constraint_jacobian(x), M.rank_tol())
                     : Mat::Identity(M.ambient_dim(), M.ambient_dim());
  };
  return make_field(&M, alpha, frame, std::move(background));
}

CompatibleMetricField build_compatible_metric(const AssociatedContactBundle& assoc,
                                              MetricField background) {
  auto frame = [&assoc](const Vec& x) { return assoc.quotient_frame(x); };
  return make_field(&assoc.total, assoc.alpha_tot, frame, std::move(background));
}

MetricInvariantsReport verify_metric_invariants(const CompatibleMetricField& field,
                                                const SampleSet& samples, uint64_t seed) {
  MetricInvariantsReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (const Vec& x : samples.points) {
    const Mat F = field.frame(x);
    const Mat G = field.metric(x);
    const Mat J = field.complex_structure(x);
    const Mat Gf = F.transpose() * G * F;
    Eigen::SelfAdjointEigenSolver<Mat> es(Gf);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());

    const Vec R = field.reeb(x);
    rep.reeb_unit_residual = std::max(rep.reeb_unit_residual, std::abs(R.dot(G * R) - 1.0));

    const Vec a = field.alpha.on_frame(x, F);
    const Mat xi = F * linalg::null_space(a.transpose(), 1e-12);
    for (int i = 0; i < xi.cols(); ++i)
      rep.reeb_orthogonality = std::max(rep.reeb_orthogonality, std::abs(R.dot(G * xi.col(i))));

    for (int t = 0; t < 4; ++t) {
      const Vec u = xi * rng.normal_vec(static_cast<int>(xi.cols()));
      const Vec v = xi * rng.normal_vec(static_cast<int>(xi.cols()));
      const double d = forms::eval_d(field.alpha, x, u, v);
      rep.compatibility_residual =
          std::max(rep.compatibility_residual, std::abs(d - u.dot(G * (J * v))));
      rep.j_isometry_residual =
          std::max(rep.j_isometry_residual, std::abs((J * u).dot(G * (J * v)) - u.dot(G * v)));
      const Vec jju = J * (J * u);
      rep.j_squared_residual =
          std::max(rep.j_squared_residual, (jju + u).norm() / std::max(1.0, u.norm()));
    }
  }
  return rep;
}

double killing_residual(const CompatibleMetricField& field, const SampleSet& samples, double h,
                        int threads) {
  const int n = samples.count();
  std::vector<double> res(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int i) {
    const Vec& x = samples.points[static_cast<size_t>(i)];
    const Mat U = field.frame(x);
    const Mat L = forms::lie_derivative_metric(field.metric, field.reeb, x, U, h, field.space);
    res[static_cast<size_t>(i)] = L.cwiseAbs().maxCoeff();
  });
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  return worst;
}

PositivityReport positivity_check(const OneFormField& alpha, const GroupAction& torus,
                                  const Vec& Xcoords, const SampleSet& samples) {
  PositivityReport rep;
  rep.min_pairing = std::numeric_limits<double>::infinity();
  for (const Vec& x : samples.points)
    rep.min_pairing =
        std::min(rep.min_pairing, contact::moment_alpha(alpha, torus, x).dot(Xcoords));
  rep.pass = rep.min_pairing > 0.0;
  return rep;
}

double reeb_verticality_residual(const AssociatedContactBundle& assoc,
                                 const CompatibleMetricField& field,
                                 const SampleSet& product_samples) {
  const int NP = assoc.bundle->P->ambient_dim();
  double worst = 0.0;
  for (const Vec& x : product_samples.points) {
    const Vec R = field.reeb(x);
    const Vec dpi = assoc.bundle->projection.jacobian(x.head(NP)) * R.head(NP);
    worst = std::max(worst, dpi.cwiseAbs().maxCoeff());
  }
  return worst;
}

Mat horizontal_metric_block(const AssociatedContactBundle& assoc,
                            const CompatibleMetricField& field, const Vec& x,
                            const Mat& base_frame) {
  const int NP = assoc.bundle->P->ambient_dim();
  const Vec p = x.head(NP);
  const int nb = static_cast<int>(base_frame.cols());
  Mat lifts = Mat::Zero(x.size(), nb);
  for (int i = 0; i < nb; ++i)
    lifts.col(i).head(NP) = assoc.bundle->horizontal_lift(p, base_frame.col(i));
  const Mat G = field.metric(x);
  return lifts.transpose() * G * lifts;
}

}  // namespace cfb::kcontact
