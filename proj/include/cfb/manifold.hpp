#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfb/jet.hpp"
#include "cfb/util.hpp"

namespace cfb::geom {

/// Orthonormal tangent frame at a point: columns span ker(Dconstraint).
/// The gauge (choice of basis) is not canonical; nothing downstream may
/// depend on it beyond the subspace it spans.
struct TangentFrame {
  Vec base_point;
  Mat columns;  // ambient_dim x n, orthonormal

  int dim() const { return static_cast<int>(columns.cols()); }
};

/// Deterministic batch of accepted manifold points.
struct SampleSet {
  uint64_t seed = 0;
  std::vector<Vec> points;

  int count() const { return static_cast<int>(points.size()); }
};

/// A manifold represented as a regular level set {x : constraint(x) = 0}
/// in ambient Euclidean space. All geometry downstream is evaluated
/// pointwise through this representation.
class EmbeddedManifold {
 public:
  EmbeddedManifold() = default;
  EmbeddedManifold(std::string name, SmoothMap constraint,
                   double constraint_tol = 1e-10, double rank_tol = 1e-8);

  const std::string& name() const { return name_; }
  int ambient_dim() const { return ambient_dim_; }
  int codim() const { return codim_; }
  int dim() const { return ambient_dim_ - codim_; }
  double constraint_tol() const { return constraint_tol_; }
  double rank_tol() const { return rank_tol_; }
  const SmoothMap& constraint() const { return constraint_; }

  /// Max-norm of the constraint residual.
  double residual(const Vec& x) const;

  /// Constraint Jacobian (codim x ambient_dim); empty when codim = 0.
  Mat constraint_jacobian(const Vec& x) const;

  bool contains(const Vec& x) const;

  /// Gauss-Newton projection of q onto the level set.
  /// Throws NonConvergence / RankDeficient.
  Vec retract(const Vec& q, int max_iter = 50) const;

  /// Orthonormal frame of the tangent space at an accepted point.
  TangentFrame tangent_frame(const Vec& p) const;

  /// Ambient Gaussian draws projected onto the manifold; rejection on
  /// retraction failure. Deterministic in (manifold, seed, count).
  SampleSet sample(int count, uint64_t seed) const;

 private:
  std::string name_;
  SmoothMap constraint_;
  int ambient_dim_ = 0;
  int codim_ = 0;
  double constraint_tol_ = 1e-10;
  double rank_tol_ = 1e-8;
};

/// Product manifold: constraints stacked blockwise. Point layout is the
/// concatenation of the factors' ambient coordinates.
EmbeddedManifold product_manifold(const std::string& name,
                                  const EmbeddedManifold& a,
                                  const EmbeddedManifold& b);

/// All of R^n as a trivial level set (codim 0).
EmbeddedManifold euclidean_space(int n);

/// Ellipsoid sum(a_j |z_j|^2) = 1 in C^n = R^(2n), coordinates interleaved
/// (x_1, y_1, ..., x_n, y_n). a = ones gives the round sphere S^(2n-1).
EmbeddedManifold ellipsoid(const Vec& a);

/// Unit sphere S^(d-1) in R^d.
EmbeddedManifold sphere(int ambient_dim);

}  // namespace cfb::geom
