#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfb/contact.hpp"
#include "cfb/forms.hpp"
#include "cfb/liealg.hpp"

namespace cfb::bundles {

using contact::CoorientedAnnihilatorPoint;
using forms::OneFormField;
using forms::VectorFieldEntity;
using geom::EmbeddedManifold;
using geom::SampleSet;
using lie::CoadjointElement;
using lie::GroupAction;
using lie::MatrixLieGroup;

/// Principal bundle G -> P -> B with a connection one-form, all living on
/// embedded level sets. The connection is stored componentwise in the
/// algebra basis.
struct PrincipalBundle {
  std::string name;
  const EmbeddedManifold* P = nullptr;
  const MatrixLieGroup* G = nullptr;
  GroupAction action;  // structure group acting on P
  const EmbeddedManifold* B = nullptr;
  geom::SmoothMap projection;  // jet-evaluable P ambient -> B ambient
  std::vector<OneFormField> connection;

  /// A_p(u) in algebra coordinates.
  Vec connection_value(const Vec& p, const Vec& u) const;

  /// Rows [Dconstraint; connection coefficients] define horizontality.
  /// Returns an orthonormal basis of ker A cap T_p P (dimension dim B).
  Mat horizontal_frame(const Vec& p) const;

  /// Horizontal lift of the tangential part of the ambient base vector
  /// x_hat at pi(p). Smooth in p near P, so finite differences of lifted
  /// fields are meaningful.
  Vec horizontal_lift(const Vec& p, const Vec& x_hat) const;

  /// The lift as a value-only field (pointwise least-squares solve).
  VectorFieldEntity lift_field(const Vec& x_hat) const;

  /// Tangential projection of x_hat at base point b, as a value-only field
  /// on the base ambient space.
  VectorFieldEntity base_field(const Vec& x_hat) const;
};

/// Residuals of the connection axioms over samples: A reproduces generators,
/// the pullback under the group action preserves A (abelian structure
/// groups), the projection intertwines the action, and dpi has full rank.
struct ConnectionReport {
  double generator_residual = 0.0;
  double equivariance_residual = 0.0;
  double projection_equivariance = 0.0;
  int min_projection_rank = 0;
};
ConnectionReport verify_connection(const PrincipalBundle& bundle, const SampleSet& samples,
                                   int group_draws = 10, uint64_t seed = 1);

/// Curvature by the structure equation dA(u, v) + [A(u), A(v)], requiring
/// both arguments horizontal at p. Throws NotHorizontal.
Vec curvature_structure_eq(const PrincipalBundle& bundle, const Vec& p, const Vec& u,
                           const Vec& v, double horizontal_tol = 1e-7);

/// Curvature as [u_lift, v_lift] - [u_base, v_base]_lift at p, where the
/// base extensions are tangential projections of constant ambient fields.
/// The result is a vertical vector at p; verticality beyond tolerance
/// signals a broken frame extension. Throws FrameExtensionFailure.
Vec curvature_bracket_def(const PrincipalBundle& bundle, const Vec& u_hat, const Vec& v_hat,
                          const Vec& p, double vertical_tol = 1e-5);

/// Weinstein fatness over a set of covectors and sample points: assembles
/// the skew pairing <mu, Curv(f_i, f_j)> on horizontal frames and reports
/// the worst relative determinant. PASS iff it stays above fat_tol.
struct FatnessReport {
  double min_rel_det = 0.0;
  double min_abs_det = 0.0;
  bool pass = false;
  std::optional<Vec> witness_point;
  std::optional<CoadjointElement> witness_mu;
};
FatnessReport fatness_check(const PrincipalBundle& bundle,
                            const std::vector<CoadjointElement>& mu_set,
                            const SampleSet& samples, double fat_tol = 1e-6,
                            int threads = 1);

/// Associated contact fiber bundle, represented on the product P x F with
/// all checks run against frames transverse to the diagonal orbit
/// directions; the quotient never materializes.
struct AssociatedContactBundle {
  const PrincipalBundle* bundle = nullptr;
  const EmbeddedManifold* F = nullptr;
  OneFormField alpha_F;
  GroupAction fiber_action;  // G acting on F, preserving alpha_F
  EmbeddedManifold total;    // product P x F
  OneFormField alpha_tot;    // <Psi(f), A_p> + alpha_F
  std::vector<Mat> diagonal_generators;  // (-X_P, X_F) ambient matrices

  int quotient_dim() const;

  /// Columns X_{PxF}(x) of the diagonal orbit directions.
  Mat orbit_directions(const Vec& x) const;

  /// Orthonormal frame of the orbit-orthogonal complement in T_x(PxF),
  /// modeling the tangent space of the quotient. Throws NonFreePoint.
  Mat quotient_frame(const Vec& x) const;

  /// Vertical directions of the quotient (fiber directions mod orbit),
  /// expressed inside the quotient frame span.
  Mat vertical_subspace(const Vec& x, const Mat& quotient_frame_cols) const;

  /// Fiber moment map <Psi(f), X_i> = alpha_F(X_i Fpoint).
  CoadjointElement fiber_moment(const Vec& f) const;

  Vec p_part(const Vec& x) const { return x.head(bundle->P->ambient_dim()); }
  Vec f_part(const Vec& x) const { return x.tail(F->ambient_dim()); }
};

/// Build the total-space one-form and verify the fiber form is invariant
/// (throws NotInvariantFiberForm otherwise).
AssociatedContactBundle assemble_alpha_tot(const PrincipalBundle& bundle,
                                           const EmbeddedManifold& F,
                                           const OneFormField& alpha_F,
                                           const GroupAction& fiber_action,
                                           const SampleSet& fiber_samples,
                                           double invariance_tol = 1e-8);

/// max over samples and algebra basis of |iota(X_{PxF}) alpha_tot|.
double basicness_residual(const AssociatedContactBundle& assoc, const SampleSet& samples);

/// Contactness of the associated distribution: bordered Pfaffian of
/// alpha_tot over quotient frames. Throws nothing; report records the
/// witness on failure.
struct AssocContactReport {
  double min_abs_pfaffian = 0.0;
  bool pass = false;
  std::optional<Vec> witness_point;
};
AssocContactReport verify_contact_associated(const AssociatedContactBundle& assoc,
                                             const SampleSet& product_samples,
                                             double pf_tol = 1e-8, int threads = 1);

/// Cross-check of the curvature pairing identity
///   s * d(alpha_tot)(u_lift, v_lift) = <s Psi(f), Curv_A(u_lift, v_lift)>
/// at (point, scale, tangent pair) triples; returns the max residual
/// relative to the term scale.
double sigma_pairing_residual(const AssociatedContactBundle& assoc,
                              const SampleSet& product_samples,
                              const std::vector<double>& scale_grid, uint64_t seed);

/// The connection canonically attached to a fiberwise-contact distribution:
/// inside xi = ker alpha, the d(alpha)-orthogonal complement of the vertical
/// contact directions. frame spans the ambient tangent model (tangent or
/// quotient frame); vertical_cols must lie in its span.
/// Throws DegenerateFiberRestriction.
Mat contact_connection(const OneFormField& alpha, const Vec& x, const Mat& frame,
                       const Mat& vertical_cols, double rank_tol = 1e-8);

/// A-induced horizontal subspace at a product point, embedded as product
/// vectors (h, 0) projected into the quotient frame span.
Mat induced_horizontal_subspace(const AssociatedContactBundle& assoc, const Vec& x);

/// Piecewise-smooth base path with velocity.
struct BasePath {
  std::function<Vec(double)> point;
  std::function<Vec(double)> velocity;
};

/// Great-circle loop in the coordinate plane (i, j) of the base sphere.
BasePath equatorial_loop(int ambient_dim, int i = 0, int j = 1);

/// Parallel transport of a total-space point along a base path with respect
/// to the contact connection of alpha_tot, with optional transported
/// columns (variational equation). Throws FlowEscape / NonConvergence.
struct TransportResult {
  Vec end_point;
  Mat transported;  // dPhi applied to the requested columns
};
TransportResult parallel_transport(const AssociatedContactBundle& assoc, const BasePath& path,
                                   const Vec& x0, int steps, const Mat& columns = Mat());

/// End-to-end transport check along a path: base tracking, invariance of the
/// fiberwise contact hyperplane, and co-orientation preservation.
struct TransportCheck {
  Vec end_point;
  double base_tracking_error = 0.0;
  double hyperplane_angle = 0.0;      // sin of the largest offending angle
  double coorientation_value = 0.0;   // positive iff co-orientation preserved
};
TransportCheck check_fiber_transport(const AssociatedContactBundle& assoc,
                                     const BasePath& path, const Vec& x0, int steps);

}  // namespace cfb::bundles
