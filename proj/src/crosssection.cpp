#include "cfb/crosssection.hpp"

namespace cfb::xsection {

using geom::Jet;
using geom::JetVec;
using geom::SmoothMap;

Vec SliceData::m_components(const CoadjointElement& eta) const {
  return complement.transpose() * eta;
}

bool SliceData::contains(const CoadjointElement& eta, double tol) const {
  if (complement.cols() > 0 && m_components(eta).cwiseAbs().maxCoeff() > tol) return false;
  const double nn = eta.norm() * mu.norm();
  if (nn == 0.0) return false;
  return eta.dot(mu) / nn > 1.0 - cone_eps;
}

SliceData build_slice(const MatrixLieGroup& G, const CoadjointElement& mu) {
  SliceData slice;
  slice.mu = mu;
  slice.isotropy = G.isotropy_algebra(mu);
  // m = orthogonal complement of g_mu under the Ad-invariant inner product
  slice.complement = linalg::null_space(slice.isotropy.transpose() * G.inner_product(), 1e-10);
  return slice;
}

double slice_pairing_check(const MatrixLieGroup& G, const SliceData& slice,
                           const CoadjointElement& eta) {
  if (!slice.contains(eta))
    throw EtaOutsideSlice("covector is outside the slice cone");
  const int r = slice.orbit_dim();
  if (r == 0) return std::numeric_limits<double>::infinity();
  Mat S(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      S(i, j) = eta.dot(G.bracket_coords(slice.complement.col(i), slice.complement.col(j)));
  Eigen::JacobiSVD<Mat> svd(S);
  return svd.singularValues().minCoeff();
}

namespace {

// Stacked residual (manifold constraint; m-components of the moment map) as
// a jet-evaluable map; the moment entries are alpha(X_M) compositions.
SmoothMap membership_residual_map(const EmbeddedManifold& M, const OneFormField& alpha,
                                  const GroupAction& action, const SliceData& slice) {
  const int N = M.ambient_dim();
  const int k = M.codim();
  const int r = slice.orbit_dim();
  const SmoothMap constraint = M.constraint();
  const SmoothMap acoeff = alpha.coefficients();
  std::vector<Mat> mgens;
  for (int i = 0; i < r; ++i) mgens.push_back(action.generator_matrix(slice.complement.col(i)));
  return {N, k + r, [constraint, acoeff, mgens, k, r, N](const JetVec& x) {
            JetVec out;
            out.reserve(static_cast<size_t>(k + r));
            if (k) {
              JetVec c = constraint(x);
              out.insert(out.end(), c.begin(), c.end());
            }
            if (r) {
              const JetVec a = acoeff(x);
              for (const Mat& gen : mgens) {
                Jet s(0.0);
                for (int i = 0; i < N; ++i) {
                  Jet gi(0.0);
                  for (int j = 0; j < N; ++j)
                    if (gen(i, j) != 0.0) gi += Jet(gen(i, j)) * x[static_cast<size_t>(j)];
                  s += a[static_cast<size_t>(i)] * gi;
                }
                out.push_back(s);
              }
            }
            return out;
          }};
}

}  // namespace

std::vector<CrossSectionSample> find_cross_section(const EmbeddedManifold& M,
                                                   const OneFormField& alpha,
                                                   const GroupAction& action,
                                                   const SliceData& slice, int count,
                                                   uint64_t seed, int seed_budget) {
  const SmoothMap res_map = membership_residual_map(M, alpha, action, slice);
  std::vector<CrossSectionSample> out;
  Rng rng(seed);
  int attempts = 0;
  const int budget = seed_budget * count;
  while (static_cast<int>(out.size()) < count && attempts < budget) {
    ++attempts;
    Vec x = rng.normal_vec(M.ambient_dim());
    bool ok = true;
    for (int it = 0; it < 50; ++it) {
      const auto [val, J] = res_map.eval(x);
      if (val.cwiseAbs().maxCoeff() <= 1e-11) break;
      Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv[sv.size() - 1] <= 1e-10 * sv[0]) {
        ok = false;
        break;
      }
      x -= svd.solve(val);
      if (!x.allFinite() || x.norm() > 1e6) {
        ok = false;
        break;
      }
      if (it == 49) ok = false;
    }
    if (!ok) continue;
    const double residual = res_map.value(x).cwiseAbs().maxCoeff();
    if (residual > 1e-8) continue;
    if (!slice.contains(contact::moment_alpha(alpha, action, x))) continue;
    out.push_back({std::move(x), residual});
  }
  if (static_cast<int>(out.size()) < count)
    throw NoSolutions("cross-section solver found " + std::to_string(out.size()) + " of " +
                      std::to_string(count) + " points within budget");
  return out;
}

Mat cross_section_frame(const EmbeddedManifold& M, const OneFormField& alpha,
                        const GroupAction& action, const SliceData& slice, const Vec& x) {
  const SmoothMap res_map = membership_residual_map(M, alpha, action, slice);
  return linalg::null_space(res_map.jacobian(x), 1e-8);
}

SplittingReport verify_splitting(const EmbeddedManifold& M, const OneFormField& alpha,
                                 const GroupAction& action, const SliceData& slice,
                                 const Vec& x) {
  SplittingReport rep;
  const int r = slice.orbit_dim();

  // (a) m-orbit directions lie in ker alpha
  Mat mM(M.ambient_dim(), r);
  for (int i = 0; i < r; ++i) {
    mM.col(i) = action.induced_vector_field(slice.complement.col(i), x);
    rep.orbit_in_xi_residual =
        std::max(rep.orbit_in_xi_residual, std::abs(alpha(x, mM.col(i))));
  }

  // xi and T_x R cap xi
  const Mat T = M.tangent_frame(x).columns;
  const Vec a = alpha.on_frame(x, T);
  const Mat xi = T * linalg::null_space(a.transpose(), 1e-10);
  rep.xi_dim = static_cast<int>(xi.cols());

  const Mat RF = cross_section_frame(M, alpha, action, slice, x);
  const Vec aR = alpha.on_frame(x, RF);
  const Mat xiR = RF * linalg::null_space(aR.transpose(), 1e-10);

  // (b) dimensions add and the joint frame has full rank
  Mat joint(M.ambient_dim(), r + xiR.cols());
  if (r) joint.leftCols(r) = mM;
  joint.rightCols(xiR.cols()) = xiR;
  Eigen::JacobiSVD<Mat> svd(joint);
  const auto& sv = svd.singularValues();
  rep.joint_rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-8 * std::max(sv[0], 1e-300)) ++rep.joint_rank;
  rep.dimensions_match =
      (r + static_cast<int>(xiR.cols()) == rep.xi_dim) && (rep.joint_rank == rep.xi_dim);

  // (c) dalpha-orthogonality of the two summands
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < xiR.cols(); ++j)
      rep.dalpha_orthogonality = std::max(
          rep.dalpha_orthogonality, std::abs(forms::eval_d(alpha, x, mM.col(i), xiR.col(j))));
  return rep;
}

CrossSectionContactReport verify_cross_section_contact(
    const EmbeddedManifold& M, const OneFormField& alpha, const GroupAction& action,
    const SliceData& slice, const std::vector<CrossSectionSample>& samples, double pf_tol,
    uint64_t seed) {
  CrossSectionContactReport rep;
  rep.min_abs_pfaffian = std::numeric_limits<double>::infinity();
  rep.pass = true;

  // random conformal factor for the independence check
  Rng rng(seed);
  const double c0 = rng.uniform(-0.4, 0.4), c1 = rng.uniform(-0.4, 0.4);
  const int N = M.ambient_dim();
  const SmoothMap f(N, 1, [c0, c1](const JetVec& x) {
    return JetVec{Jet(c0) * x[0] + Jet(c1) * sin(x[1])};
  });
  const OneFormField alpha_scaled = forms::conformal_rescale(alpha, f);

  for (const auto& s : samples) {
    const Mat RF = cross_section_frame(M, alpha, action, slice, s.x);
    rep.frame_dim = static_cast<int>(RF.cols());
    const double pf = std::abs(forms::bordered_pfaffian(alpha, s.x, RF));
    const double scale = forms::pfaffian_scale(alpha, s.x, RF);
    rep.min_abs_pfaffian = std::min(rep.min_abs_pfaffian, pf);
    if (pf < pf_tol * scale) rep.pass = false;

    // the same points satisfy membership for the rescaled form
    const Vec m_res = slice.m_components(contact::moment_alpha(alpha_scaled, action, s.x));
    if (m_res.size())
      rep.conformal_membership_residual =
          std::max(rep.conformal_membership_residual, m_res.cwiseAbs().maxCoeff());
    const double pf2 = std::abs(forms::bordered_pfaffian(alpha_scaled, s.x, RF));
    const double scale2 = forms::pfaffian_scale(alpha_scaled, s.x, RF);
    if ((pf2 < pf_tol * scale2) != (pf < pf_tol * scale)) rep.pass = false;
  }
  return rep;
}

double isotropy_invariance_residual(const EmbeddedManifold& M, const OneFormField& alpha,
                                    const GroupAction& action, const SliceData& slice,
                                    const std::vector<CrossSectionSample>& samples, int draws,
                                    uint64_t seed) {
  Rng rng(seed);
  const auto& G = action.group();
  double worst = 0.0;
  const int iso_dim = static_cast<int>(slice.isotropy.cols());
  for (int d = 0; d < draws; ++d) {
    const Vec coords = slice.isotropy * rng.normal_vec(iso_dim);
    const Mat amb = action.ambient_matrix(G.exp(coords));
    for (const auto& s : samples) {
      const Vec y = amb * s.x;
      const Vec res = slice.m_components(contact::moment_alpha(alpha, action, y));
      if (res.size()) worst = std::max(worst, res.cwiseAbs().maxCoeff());
      worst = std::max(worst, M.residual(y));
    }
  }
  return worst;
}

double bracket_pairing_residual(const OneFormField& alpha, const GroupAction& action,
                                const SliceData& slice, const Vec& x) {
  const int r = slice.orbit_dim();
  double worst = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const auto [lhs, rhs] = contact::orbit_two_form_identity(
          alpha, action, x, slice.complement.col(i), slice.complement.col(j));
      // lhs = dalpha(m_iM, m_jM), rhs = -<Psi, [m_i, m_j]>
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

}  // namespace cfb::xsection
