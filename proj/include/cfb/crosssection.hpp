#pragma once

#include "cfb/contact.hpp"

namespace cfb::xsection {

using contact::ContactStructure;
using forms::OneFormField;
using geom::EmbeddedManifold;
using lie::CoadjointElement;
using lie::GroupAction;
using lie::MatrixLieGroup;

/// Slice data at a coadjoint point mu: the isotropy algebra g_mu, its
/// invariant complement m = g_mu-perp, and an R^{>0}-invariant open cone S
/// around the ray through mu inside the annihilator of m.
struct SliceData {
  CoadjointElement mu;
  Mat isotropy;    // basis columns of g_mu (algebra coordinates)
  Mat complement;  // basis columns of m
  double cone_eps = 0.1;

  int orbit_dim() const { return static_cast<int>(complement.cols()); }

  /// <eta, m_i> for the complement basis (annihilator membership residuals).
  Vec m_components(const CoadjointElement& eta) const;

  /// Membership in S: eta annihilates m and lies in the cone around mu.
  bool contains(const CoadjointElement& eta, double tol = 1e-8) const;
};

/// Build the slice for mu; the complement is orthogonal under the group's
/// Ad-invariant inner product, which automatically gives mu|_m = 0.
SliceData build_slice(const MatrixLieGroup& G, const CoadjointElement& mu);

/// Min singular value of the pairing (X, Y) -> <eta, [X, Y]> on m.
/// Vacuously +inf when m = 0. Throws EtaOutsideSlice.
double slice_pairing_check(const MatrixLieGroup& G, const SliceData& slice,
                           const CoadjointElement& eta);

struct CrossSectionSample {
  Vec x;
  double membership_residual = 0.0;
};

/// Find points of R = Psi_alpha^{-1}(S) by Gauss-Newton on the stacked
/// residual (manifold constraint; m-components of the moment map), seeded
/// from manifold samples. Throws NoSolutions after the seed budget.
std::vector<CrossSectionSample> find_cross_section(const EmbeddedManifold& M,
                                                   const OneFormField& alpha,
                                                   const GroupAction& action,
                                                   const SliceData& slice, int count,
                                                   uint64_t seed, int seed_budget = 200);

/// Orthonormal frame of T_x R: null space of the stacked Jacobian of the
/// manifold constraint and the m-components of the moment map.
Mat cross_section_frame(const EmbeddedManifold& M, const OneFormField& alpha,
                        const GroupAction& action, const SliceData& slice, const Vec& x);

/// The three splitting conditions at a cross-section point:
/// (a) the m-orbit directions lie in xi, (b) xi = m_M(x) + (xi cap T_x R) as
/// a direct sum, (c) the sum is dalpha-orthogonal.
struct SplittingReport {
  double orbit_in_xi_residual = 0.0;     // (a)
  bool dimensions_match = false;         // (b)
  int joint_rank = 0;
  int xi_dim = 0;
  double dalpha_orthogonality = 0.0;     // (c)
};
SplittingReport verify_splitting(const EmbeddedManifold& M, const OneFormField& alpha,
                                 const GroupAction& action, const SliceData& slice,
                                 const Vec& x);

/// Contactness of the cross-section: bordered Pfaffian of alpha over T_x R
/// frames, plus conformal independence of membership under e^f alpha.
struct CrossSectionContactReport {
  double min_abs_pfaffian = 0.0;
  bool pass = false;
  double conformal_membership_residual = 0.0;
  int frame_dim = 0;
};
CrossSectionContactReport verify_cross_section_contact(
    const EmbeddedManifold& M, const OneFormField& alpha, const GroupAction& action,
    const SliceData& slice, const std::vector<CrossSectionSample>& samples,
    double pf_tol = 1e-8, uint64_t seed = 5);

/// max membership residual of cross-section samples pushed by random
/// elements of the isotropy group G_mu.
double isotropy_invariance_residual(const EmbeddedManifold& M, const OneFormField& alpha,
                                    const GroupAction& action, const SliceData& slice,
                                    const std::vector<CrossSectionSample>& samples,
                                    int draws = 10, uint64_t seed = 6);

/// Entrywise residual of <Psi_alpha(x), [m_i, m_j]> = -dalpha(m_iM, m_jM).
double bracket_pairing_residual(const OneFormField& alpha, const GroupAction& action,
                                const SliceData& slice, const Vec& x);

}  // namespace cfb::xsection
