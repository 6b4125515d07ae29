#pragma once

#include <array>
#include <string>
#include <vector>

#include "cfb/forms.hpp"
#include "cfb/manifold.hpp"

namespace cfb::lie {

/// Coefficients of an element of g* in the basis dual to the group's
/// algebra basis.
using CoadjointElement = Vec;

/// Matrix exponential by scaling and squaring (Taylor core).
Mat matrix_exp(const Mat& A);

/// A matrix Lie group given by a faithful real representation of its
/// algebra basis. Structure constants are derived from the basis brackets
/// at construction and validated for closure and antisymmetry.
class MatrixLieGroup {
 public:
  MatrixLieGroup() = default;
  MatrixLieGroup(std::string name, std::vector<Mat> algebra_basis, Mat inner_product);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int matrix_dim() const { return static_cast<int>(basis_.empty() ? 0 : basis_[0].rows()); }
  const std::vector<Mat>& basis() const { return basis_; }
  const Mat& inner_product() const { return inner_; }

  /// c^k_{ij} as structure(k)(i, j): [X_i, X_j] = sum_k c^k_{ij} X_k.
  const std::vector<Mat>& structure_constants() const { return structure_; }
  double closure_residual() const { return closure_residual_; }

  /// Algebra element from coordinates.
  Mat algebra(const Vec& coords) const;

  /// Coordinates of [X, Y] from coordinates of X and Y.
  Vec bracket_coords(const Vec& x, const Vec& y) const;

  /// exp(t X) as a group element in the canonical representation.
  Mat exp(const Vec& coords, double t = 1.0) const;

  /// Adjoint action matrix on algebra coordinates: coords(g X g^-1).
  Mat adjoint_matrix(const Mat& g) const;

  /// Coadjoint action: <Ad'(g) mu, X> = <mu, Ad(g^-1) X>.
  CoadjointElement coadjoint(const Mat& g, const CoadjointElement& mu) const;

  /// Basis (columns, in algebra coordinates) of the isotropy algebra of mu
  /// under the coadjoint action: {X : <mu, [X, .]> = 0}.
  Mat isotropy_algebra(const CoadjointElement& mu, double rank_tol = 1e-8) const;

  /// Coordinates of a canonical-representation algebra matrix (least squares
  /// against the basis).
  Vec coords_of(const Mat& algebra_element) const;

  Mat random_element(Rng& rng, double scale = 1.0) const;

 private:
  std::string name_;
  std::vector<Mat> basis_;
  Mat inner_;
  std::vector<Mat> structure_;
  Mat basis_flat_;          // vectorized basis, for coords_of
  Mat basis_flat_pinv_;
  double closure_residual_ = 0.0;
};

/// Smooth left action of a group on an embedded manifold. All shipped
/// actions are linear in the point, so induced vector fields are exact
/// (generator matrix times point) and jet-evaluable.
class GroupAction {
 public:
  using ElementRep = std::function<Mat(const Mat&)>;

  GroupAction() = default;
  GroupAction(const MatrixLieGroup* group, const geom::EmbeddedManifold* manifold,
              std::vector<Mat> ambient_generators, ElementRep ambient_of);

  const MatrixLieGroup& group() const { return *group_; }
  const geom::EmbeddedManifold& manifold() const { return *manifold_; }
  const std::vector<Mat>& generators() const { return generators_; }

  /// Ambient matrix of a canonical-representation group element.
  Mat ambient_matrix(const Mat& g) const { return ambient_of_(g); }

  Vec apply(const Mat& g, const Vec& x) const { return ambient_of_(g) * x; }

  /// sum_i X_i gen_i, the ambient generator of the algebra element.
  Mat generator_matrix(const Vec& coords) const;

  /// X_M(x) = d/dt|_0 exp(tX) . x.
  Vec induced_vector_field(const Vec& coords, const Vec& x) const;

  /// The induced field as a jet-evaluable entity.
  forms::VectorFieldEntity induced_field_entity(const Vec& coords) const;

 private:
  const MatrixLieGroup* group_ = nullptr;
  const geom::EmbeddedManifold* manifold_ = nullptr;
  std::vector<Mat> generators_;
  ElementRep ambient_of_;
};

/// T^n as block-diagonal plane rotations (canonical representation).
MatrixLieGroup torus_group(int n);

/// SU(2) in the real 4x4 representation; basis -(i/2) sigma_k, structure
/// constants epsilon_ijk, inner product the identity (proportional to the
/// negative Killing form).
MatrixLieGroup su2_group();

/// Direct product with block-diagonal canonical representation.
MatrixLieGroup product_group(const MatrixLieGroup& a, const MatrixLieGroup& b);

/// The trivial group (algebra dimension zero).
MatrixLieGroup trivial_group();

/// Trivial action of the trivial group on any manifold.
GroupAction trivial_action(const MatrixLieGroup* triv, const geom::EmbeddedManifold* M);

/// Torus action rotating coordinate planes of the ambient space: basis
/// element i rotates plane p with integer weight weights(i, p). Planes
/// default to the interleaved pairs (0,1), (2,3), ...; pass explicit index
/// pairs for other layouts.
GroupAction torus_action(const MatrixLieGroup* torus, const geom::EmbeddedManifold* M,
                         const Eigen::MatrixXi& weights,
                         std::vector<std::array<int, 2>> planes = {});

/// SU(2) acting on S^3 in R^4 by the canonical representation.
GroupAction su2_action_s3(const MatrixLieGroup* su2, const geom::EmbeddedManifold* s3);

/// SU(2) acting on the first two complex coordinates of C^3, identity on the
/// third; manifold is a level set in R^6.
GroupAction su2_action_first_two(const MatrixLieGroup* su2, const geom::EmbeddedManifold* M);

/// Real 2m x 2m matrix of a complex m x m matrix (interleaved coordinates).
Mat complex_to_real(const Eigen::MatrixXcd& U);

}  // namespace cfb::lie
