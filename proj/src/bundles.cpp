#include "cfb/bundles.hpp"

#include <cmath>

namespace cfb::bundles {

using geom::Jet;
using geom::JetVec;
using geom::SmoothMap;

Vec PrincipalBundle::connection_value(const Vec& p, const Vec& u) const {
  Vec out(static_cast<int>(connection.size()));
  for (size_t k = 0; k < connection.size(); ++k)
    out[static_cast<int>(k)] = connection[k](p, u);
  return out;
}

Mat PrincipalBundle::horizontal_frame(const Vec& p) const {
  const int N = P->ambient_dim();
  const int k = P->codim();
  const int dg = G->dim();
  Mat rows(k + dg, N);
  if (k) rows.topRows(k) = P->constraint_jacobian(p);
  for (int i = 0; i < dg; ++i)
    rows.row(k + i) = connection[static_cast<size_t>(i)].covector(p).transpose();
  const Mat basis = linalg::null_space(rows, P->rank_tol());
  if (basis.cols() != B->dim())
    throw RankDeficient("horizontal space of " + name + " has dimension " +
                        std::to_string(basis.cols()) + ", expected " + std::to_string(B->dim()));
  return basis;
}

Vec PrincipalBundle::horizontal_lift(const Vec& p, const Vec& x_hat) const {
  const int N = P->ambient_dim();
  const int k = P->codim();
  const int dg = G->dim();
  const Vec b = projection.value(p);
  const Mat Tb = B->tangent_frame(b).columns;
  const Vec x_tan = Tb * (Tb.transpose() * x_hat);

  const Mat Jpi = projection.jacobian(p);
  Mat M(k + dg + B->ambient_dim(), N);
  Vec rhs = Vec::Zero(M.rows());
  if (k) M.topRows(k) = P->constraint_jacobian(p);
  for (int i = 0; i < dg; ++i)
    M.row(k + i) = connection[static_cast<size_t>(i)].covector(p).transpose();
  M.bottomRows(B->ambient_dim()) = Jpi;
  rhs.tail(B->ambient_dim()) = x_tan;
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(rhs);
}

VectorFieldEntity PrincipalBundle::lift_field(const Vec& x_hat) const {
  return VectorFieldEntity(P->ambient_dim(),
                           [this, x_hat](const Vec& q) { return horizontal_lift(q, x_hat); });
}

VectorFieldEntity PrincipalBundle::base_field(const Vec& x_hat) const {
  return VectorFieldEntity(B->ambient_dim(), [this, x_hat](const Vec& b) {
    const Mat Tb = B->tangent_frame(b).columns;
    return Vec(Tb * (Tb.transpose() * x_hat));
  });
}

ConnectionReport verify_connection(const PrincipalBundle& bundle, const SampleSet& samples,
                                   int group_draws, uint64_t seed) {
  ConnectionReport rep;
  rep.min_projection_rank = bundle.B->dim();
  Rng rng(seed);
  const auto& G = *bundle.G;
  const int dg = G.dim();
  for (const Vec& p : samples.points) {
    for (int i = 0; i < dg; ++i) {
      const Vec gen = bundle.action.generators()[static_cast<size_t>(i)] * p;
      const Vec a = bundle.connection_value(p, gen);
      rep.generator_residual =
          std::max(rep.generator_residual, (a - Vec::Unit(dg, i)).cwiseAbs().maxCoeff());
    }
    const Mat Jpi = bundle.projection.jacobian(p);
    const Mat T = bundle.P->tangent_frame(p).columns;
    Eigen::JacobiSVD<Mat> svd{Mat(Jpi * T)};
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-8 * sv[0]) ++rank;
    rep.min_projection_rank = std::min(rep.min_projection_rank, rank);
  }
  for (int d = 0; d < group_draws; ++d) {
    const Mat g = G.random_element(rng);
    const Mat amb = bundle.action.ambient_matrix(g);
    const Mat ad_inv = dg ? G.adjoint_matrix(g.inverse()) : Mat(0, 0);
    for (const Vec& p : samples.points) {
      const Vec q = amb * p;
      for (int k = 0; k < dg; ++k) {
        // ((R_g)^* A_k)_p = amb^T A_k(q); compare with sum_j Ad(g^-1)_{kj} A_j(p)
        const Vec pulled = amb.transpose() * bundle.connection[static_cast<size_t>(k)].covector(q);
        Vec expected = Vec::Zero(bundle.P->ambient_dim());
        for (int j = 0; j < dg; ++j)
          expected += ad_inv(k, j) * bundle.connection[static_cast<size_t>(j)].covector(p);
        rep.equivariance_residual =
            std::max(rep.equivariance_residual, (pulled - expected).cwiseAbs().maxCoeff());
      }
      rep.projection_equivariance = std::max(
          rep.projection_equivariance,
          (bundle.projection.value(q) - bundle.projection.value(p)).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

Vec curvature_structure_eq(const PrincipalBundle& bundle, const Vec& p, const Vec& u,
                           const Vec& v, double horizontal_tol) {
  const int dg = bundle.G->dim();
  if (dg == 0) return Vec(0);
  const Vec au = bundle.connection_value(p, u);
  const Vec av = bundle.connection_value(p, v);
  const double worst = std::max(au.cwiseAbs().maxCoeff(), av.cwiseAbs().maxCoeff());
  if (worst > horizontal_tol * std::max(1.0, std::max(u.norm(), v.norm())))
    throw NotHorizontal("curvature arguments have connection residual " + std::to_string(worst));
  Vec out(dg);
  for (int k = 0; k < dg; ++k)
    out[k] = forms::eval_d(bundle.connection[static_cast<size_t>(k)], p, u, v);
  out += bundle.G->bracket_coords(au, av);
  return out;
}

Vec curvature_bracket_def(const PrincipalBundle& bundle, const Vec& u_hat, const Vec& v_hat,
                          const Vec& p, double vertical_tol) {
  const double fd_eps = 1e-5;
  const VectorFieldEntity lu = bundle.lift_field(u_hat);
  const VectorFieldEntity lv = bundle.lift_field(v_hat);
  const Vec bracket_lifts = forms::lie_bracket(lu, lv, p, fd_eps);

  const VectorFieldEntity bu = bundle.base_field(u_hat);
  const VectorFieldEntity bv = bundle.base_field(v_hat);
  const Vec b = bundle.projection.value(p);
  const Vec base_bracket = forms::lie_bracket(bu, bv, b, fd_eps);
  const Vec lifted_base_bracket = bundle.horizontal_lift(p, base_bracket);

  const Vec result = bracket_lifts - lifted_base_bracket;
  const Vec dpi = bundle.projection.jacobian(p) * result;
  if (dpi.cwiseAbs().maxCoeff() > vertical_tol * std::max(1.0, result.norm()))
    throw FrameExtensionFailure("bracket curvature is not vertical; dpi residual " +
                                std::to_string(dpi.cwiseAbs().maxCoeff()));
  return result;
}

FatnessReport fatness_check(const PrincipalBundle& bundle,
                            const std::vector<CoadjointElement>& mu_set,
                            const SampleSet& samples, double fat_tol, int threads) {
  const int n = samples.count();
  const int nh = bundle.B->dim();
  if (nh % 2 == 1)
    throw OddHorizontalDimension("horizontal dimension " + std::to_string(nh) +
                                 " cannot carry a nondegenerate skew form");
  const int dg = bundle.G->dim();
  // curvature coordinates per sample over the horizontal frame
  std::vector<std::vector<Mat>> curv(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int i) {
    const Vec& p = samples.points[static_cast<size_t>(i)];
    const Mat H = bundle.horizontal_frame(p);
    std::vector<Mat> comps(static_cast<size_t>(dg), Mat::Zero(nh, nh));
    for (int r = 0; r < nh; ++r)
      for (int c = r + 1; c < nh; ++c) {
        const Vec k = curvature_structure_eq(bundle, p, H.col(r), H.col(c));
        for (int d = 0; d < dg; ++d) {
          comps[static_cast<size_t>(d)](r, c) = k[d];
          comps[static_cast<size_t>(d)](c, r) = -k[d];
        }
      }
    curv[static_cast<size_t>(i)] = std::move(comps);
  });

  FatnessReport rep;
  rep.min_rel_det = std::numeric_limits<double>::infinity();
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (const CoadjointElement& mu : mu_set) {
      Mat S = Mat::Zero(nh, nh);
      for (int d = 0; d < dg; ++d)
        S += mu[d] * curv[static_cast<size_t>(i)][static_cast<size_t>(d)];
      const double det = std::abs(S.determinant());
      // scale floor chosen so that pow(scale, nh) cannot underflow
      const double scale = std::max(S.norm(), 1e-30);
      const double rel = det / std::pow(scale, nh);
      if (rel < rep.min_rel_det) {
        rep.min_rel_det = rel;
        rep.min_abs_det = det;
        rep.witness_point = samples.points[static_cast<size_t>(i)];
        rep.witness_mu = mu;
      }
    }
  }
  rep.pass = rep.min_rel_det > fat_tol;
  if (rep.pass) {
    rep.witness_point.reset();
    rep.witness_mu.reset();
  }
  return rep;
}

int AssociatedContactBundle::quotient_dim() const {
  return bundle->P->dim() + F->dim() - bundle->G->dim();
}

Mat AssociatedContactBundle::orbit_directions(const Vec& x) const {
  const int dg = bundle->G->dim();
  Mat D(x.size(), dg);
  for (int i = 0; i < dg; ++i) D.col(i) = diagonal_generators[static_cast<size_t>(i)] * x;
  return D;
}

Mat AssociatedContactBundle::quotient_frame(const Vec& x) const {
  const Mat T = total.tangent_frame(x).columns;
  const int dg = bundle->G->dim();
  if (dg == 0) return T;
  const Mat D = orbit_directions(x);
  Eigen::JacobiSVD<Mat> svd(D);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-8 * std::max(sv[0], 1e-300))
    throw NonFreePoint("diagonal action is not free at this point");
  const Mat M = D.transpose() * T;  // dg x n_t
  const Mat coords = linalg::null_space(M, 1e-12);
  return T * coords;
}

Mat AssociatedContactBundle::vertical_subspace(const Vec& x, const Mat& Q) const {
  const int NP = bundle->P->ambient_dim();
  const Mat Jpi = bundle->projection.jacobian(x.head(NP));
  const Mat M = Jpi * Q.topRows(NP);
  const Mat coords = linalg::null_space(M, 1e-10);
  return Q * coords;
}

CoadjointElement AssociatedContactBundle::fiber_moment(const Vec& f) const {
  return contact::moment_alpha(alpha_F, fiber_action, f);
}

AssociatedContactBundle assemble_alpha_tot(const PrincipalBundle& bundle,
                                           const EmbeddedManifold& F,
                                           const OneFormField& alpha_F,
                                           const GroupAction& fiber_action,
                                           const SampleSet& fiber_samples,
                                           double invariance_tol) {
  const auto inv =
      contact::verify_invariance(alpha_F, fiber_action, fiber_samples, 20, 1, invariance_tol);
  if (!inv.pass)
    throw NotInvariantFiberForm("fiber form is not invariant; residual " +
                                std::to_string(inv.max_residual));

  AssociatedContactBundle assoc;
  assoc.bundle = &bundle;
  assoc.F = &F;
  assoc.alpha_F = alpha_F;
  assoc.fiber_action = fiber_action;
  assoc.total = geom::product_manifold(bundle.name + "x" + F.name(), *bundle.P, F);

  const int NP = bundle.P->ambient_dim();
  const int NF = F.ambient_dim();
  const int dg = bundle.G->dim();
  std::vector<SmoothMap> a_coeffs;
  a_coeffs.reserve(static_cast<size_t>(dg));
  for (const auto& A : bundle.connection) a_coeffs.push_back(A.coefficients());
  const SmoothMap f_coeff = alpha_F.coefficients();
  const std::vector<Mat> fgens = fiber_action.generators();

  assoc.alpha_tot =
      OneFormField({NP + NF, NP + NF, [NP, NF, dg, a_coeffs, f_coeff, fgens](const JetVec& x) {
                      const JetVec xp(x.begin(), x.begin() + NP);
                      const JetVec xf(x.begin() + NP, x.end());
                      const JetVec af = f_coeff(xf);
                      JetVec out(static_cast<size_t>(NP + NF), Jet(0.0));
                      for (int k = 0; k < dg; ++k) {
                        Jet psi(0.0);
                        const Mat& gen = fgens[static_cast<size_t>(k)];
                        for (int i = 0; i < NF; ++i) {
                          Jet gi(0.0);
                          for (int j = 0; j < NF; ++j)
                            if (gen(i, j) != 0.0)
                              gi += Jet(gen(i, j)) * xf[static_cast<size_t>(j)];
                          psi += af[static_cast<size_t>(i)] * gi;
                        }
                        const JetVec ak = a_coeffs[static_cast<size_t>(k)](xp);
                        for (int i = 0; i < NP; ++i)
                          out[static_cast<size_t>(i)] += psi * ak[static_cast<size_t>(i)];
                      }
                      for (int i = 0; i < NF; ++i)
                        out[static_cast<size_t>(NP + i)] = af[static_cast<size_t>(i)];
                      return out;
                    }});

  for (int i = 0; i < dg; ++i) {
    Mat gen = Mat::Zero(NP + NF, NP + NF);
    gen.topLeftCorner(NP, NP) = -bundle.action.generators()[static_cast<size_t>(i)];
    gen.bottomRightCorner(NF, NF) = fiber_action.generators()[static_cast<size_t>(i)];
    assoc.diagonal_generators.push_back(std::move(gen));
  }
  return assoc;
}

double basicness_residual(const AssociatedContactBundle& assoc, const SampleSet& samples) {
  double worst = 0.0;
  for (const Vec& x : samples.points) {
    const Vec a = assoc.alpha_tot.covector(x);
    for (const Mat& gen : assoc.diagonal_generators)
      worst = std::max(worst, std::abs(a.dot(gen * x)));
  }
  return worst;
}

AssocContactReport verify_contact_associated(const AssociatedContactBundle& assoc,
                                             const SampleSet& product_samples, double pf_tol,
                                             int threads) {
  const int n = product_samples.count();
  std::vector<double> pf(static_cast<size_t>(n)), scale(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int i) {
    const Vec& x = product_samples.points[static_cast<size_t>(i)];
    const Mat Q = assoc.quotient_frame(x);
    pf[static_cast<size_t>(i)] = std::abs(forms::bordered_pfaffian(assoc.alpha_tot, x, Q));
    scale[static_cast<size_t>(i)] = forms::pfaffian_scale(assoc.alpha_tot, x, Q);
  });
  AssocContactReport rep;
  rep.min_abs_pfaffian = std::numeric_limits<double>::infinity();
  rep.pass = true;
  for (int i = 0; i < n; ++i) {
    rep.min_abs_pfaffian = std::min(rep.min_abs_pfaffian, pf[static_cast<size_t>(i)]);
    if (pf[static_cast<size_t>(i)] < pf_tol * scale[static_cast<size_t>(i)] && rep.pass) {
      rep.pass = false;
      rep.witness_point = product_samples.points[static_cast<size_t>(i)];
    }
  }
  return rep;
}

double sigma_pairing_residual(const AssociatedContactBundle& assoc,
                              const SampleSet& product_samples,
                              const std::vector<double>& scale_grid, uint64_t seed) {
  Rng rng(seed);
  const PrincipalBundle& bundle = *assoc.bundle;
  const int NP = bundle.P->ambient_dim();
  double worst = 0.0;
  for (const Vec& x : product_samples.points) {
    const Vec p = x.head(NP);
    const Vec f = x.tail(assoc.F->ambient_dim());
    const Vec b = bundle.projection.value(p);
    const Mat Tb = bundle.B->tangent_frame(b).columns;
    const Vec u = bundle.horizontal_lift(p, Tb * rng.normal_vec(static_cast<int>(Tb.cols())));
    const Vec v = bundle.horizontal_lift(p, Tb * rng.normal_vec(static_cast<int>(Tb.cols())));
    Vec uL = Vec::Zero(x.size()), vL = Vec::Zero(x.size());
    uL.head(NP) = u;
    vL.head(NP) = v;
    const double d_tot = forms::eval_d(assoc.alpha_tot, x, uL, vL);
    const double pairing = assoc.fiber_moment(f).dot(curvature_structure_eq(bundle, p, u, v));
    for (double s : scale_grid) {
      const double lhs = s * d_tot;
      const double rhs = s * pairing;
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return worst;
}

Mat contact_connection(const OneFormField& alpha, const Vec& x, const Mat& frame,
                       const Mat& vertical_cols, double rank_tol) {
  const Vec a = alpha.on_frame(x, frame);
  const Mat W = forms::d_on_frame(alpha, x, frame);

  const Mat Qxi = linalg::null_space(a.transpose(), rank_tol);  // ker alpha in frame coords
  const Mat Vc = frame.transpose() * vertical_cols;
  const Mat K = linalg::null_space(a.transpose() * Vc, rank_tol);
  const Mat xi_nu = linalg::orthonormalize(Vc * K);  // fiberwise contact directions

  if (xi_nu.cols() > 0) {
    const Mat Wnu = xi_nu.transpose() * W * xi_nu;
    Eigen::JacobiSVD<Mat> svd(Wnu);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= rank_tol * std::max(sv[0], 1e-300))
      throw DegenerateFiberRestriction("dalpha degenerates on the fiberwise contact directions");
  }

  const Mat R = xi_nu.transpose() * W * Qxi;
  const Mat S = linalg::null_space(R, rank_tol);
  return frame * linalg::orthonormalize(Qxi * S);
}

Mat induced_horizontal_subspace(const AssociatedContactBundle& assoc, const Vec& x) {
  const PrincipalBundle& bundle = *assoc.bundle;
  const int NP = bundle.P->ambient_dim();
  const Mat H = bundle.horizontal_frame(x.head(NP));
  const Mat Q = assoc.quotient_frame(x);
  Mat lifted = Mat::Zero(x.size(), H.cols());
  lifted.topRows(NP) = H;
  return linalg::orthonormalize(Q * (Q.transpose() * lifted));
}

BasePath equatorial_loop(int ambient_dim, int i, int j) {
  return {[ambient_dim, i, j](double t) {
            Vec p = Vec::Zero(ambient_dim);
            p[i] = std::cos(2 * M_PI * t);
            p[j] = std::sin(2 * M_PI * t);
            return p;
          },
          [ambient_dim, i, j](double t) {
            Vec v = Vec::Zero(ambient_dim);
            v[i] = -2 * M_PI * std::sin(2 * M_PI * t);
            v[j] = 2 * M_PI * std::cos(2 * M_PI * t);
            return v;
          }};
}

TransportResult parallel_transport(const AssociatedContactBundle& assoc, const BasePath& path,
                                   const Vec& x0, int steps, const Mat& columns) {
  const PrincipalBundle& bundle = *assoc.bundle;
  const int NP = bundle.P->ambient_dim();
  auto rhs = [&](double t, const Vec& x) -> Vec {
    const Mat Q = assoc.quotient_frame(x);
    const Mat V = assoc.vertical_subspace(x, Q);
    const Mat H = contact_connection(assoc.alpha_tot, x, Q, V);
    const Mat Jpi = bundle.projection.jacobian(x.head(NP));
    const Mat JH = Jpi * H.topRows(NP);
    const Vec vel = path.velocity(t);
    Eigen::JacobiSVD<Mat> svd(JH, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return H * svd.solve(vel);
  };
  const auto res = forms::integrate_ode(rhs, x0, 0.0, 1.0, steps, &assoc.total, columns, 1e-4);
  return {res.x, res.U};
}

TransportCheck check_fiber_transport(const AssociatedContactBundle& assoc, const BasePath& path,
                                     const Vec& x0, int steps) {
  const Mat Q0 = assoc.quotient_frame(x0);
  const Mat V0 = assoc.vertical_subspace(x0, Q0);
  const Vec a0 = assoc.alpha_tot.on_frame(x0, V0);
  const Mat xi_nu0 = linalg::orthonormalize(V0 * linalg::null_space(a0.transpose(), 1e-10));
  const Vec r0 = forms::reeb_in_frame(assoc.alpha_tot, x0, V0);

  Mat U0(x0.size(), xi_nu0.cols() + 1);
  U0.leftCols(xi_nu0.cols()) = xi_nu0;
  U0.col(xi_nu0.cols()) = r0;

  const TransportResult res = parallel_transport(assoc, path, x0, steps, U0);
  const Vec& x1 = res.end_point;

  TransportCheck check;
  check.end_point = x1;
  const int NP = assoc.bundle->P->ambient_dim();
  check.base_tracking_error =
      (assoc.bundle->projection.value(x1.head(NP)) - path.point(1.0)).norm();

  const Mat Q1 = assoc.quotient_frame(x1);
  const Mat V1 = assoc.vertical_subspace(x1, Q1);
  const Vec a1 = assoc.alpha_tot.on_frame(x1, V1);
  const Mat xi_nu1 = linalg::orthonormalize(V1 * linalg::null_space(a1.transpose(), 1e-10));
  Mat target(x1.size(), xi_nu1.cols() + assoc.bundle->G->dim());
  target.leftCols(xi_nu1.cols()) = xi_nu1;
  if (assoc.bundle->G->dim())
    target.rightCols(assoc.bundle->G->dim()) = assoc.orbit_directions(x1);
  const Mat Pt = linalg::orthonormalize(target);

  for (int c = 0; c < xi_nu0.cols(); ++c) {
    const Vec u = res.transported.col(c);
    const double off = (u - Pt * (Pt.transpose() * u)).norm() / u.norm();
    check.hyperplane_angle = std::max(check.hyperplane_angle, off);
  }
  check.coorientation_value = assoc.alpha_tot(x1, res.transported.col(xi_nu0.cols()));
  return check;
}

}  // namespace cfb::bundles
