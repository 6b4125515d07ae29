#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cfb/manifold.hpp"

namespace cfb::forms {

using geom::EmbeddedManifold;
using geom::Jet;
using geom::JetVec;
using geom::SmoothMap;
using geom::TangentFrame;

/// One-form in ambient coordinates: a jet-evaluable coefficient map
/// point -> covector. Restriction to a manifold happens by evaluating on
/// tangent vectors; intrinsic coordinates never materialize.
class OneFormField {
 public:
  OneFormField() = default;
  explicit OneFormField(SmoothMap coefficients) : coeff_(std::move(coefficients)) {}

  int ambient_dim() const { return coeff_.in_dim(); }
  const SmoothMap& coefficients() const { return coeff_; }

  Vec covector(const Vec& p) const { return coeff_.value(p); }
  double operator()(const Vec& p, const Vec& u) const { return covector(p).dot(u); }

  /// alpha(f_i) over the columns of a frame.
  Vec on_frame(const Vec& p, const Mat& frame) const { return frame.transpose() * covector(p); }

 private:
  SmoothMap coeff_;
};

/// Vector field in ambient coordinates. Fields defined by formulas carry a
/// jet-evaluable map; fields obtained from pointwise linear solves carry only
/// a value evaluator, and derivative consumers fall back to central
/// differences.
class VectorFieldEntity {
 public:
  using ValueFn = std::function<Vec(const Vec&)>;

  VectorFieldEntity() = default;
  explicit VectorFieldEntity(SmoothMap coefficients)
      : dim_(coefficients.in_dim()), jet_(std::move(coefficients)) {}
  VectorFieldEntity(int dim, ValueFn value) : dim_(dim), value_(std::move(value)) {}

  int ambient_dim() const { return dim_; }
  bool has_jet() const { return jet_.has_value(); }
  const SmoothMap& jet() const { return *jet_; }

  Vec operator()(const Vec& p) const { return jet_ ? jet_->value(p) : value_(p); }

  /// Jacobian-vector product DX(p) u, exact via jets or by central FD.
  Vec pushforward(const Vec& p, const Vec& u, double fd_eps = 1e-6) const;

 private:
  int dim_ = 0;
  std::optional<SmoothMap> jet_;
  ValueFn value_;
};

/// Pointwise metric-like tensor: point -> symmetric ambient bilinear form,
/// meaningful when applied to tangent vectors.
using MetricField = std::function<Mat(const Vec&)>;

/// d(alpha)_p(u, v) = <D(coeff)(p) u, v> - <D(coeff)(p) v, u>.
double eval_d(const OneFormField& alpha, const Vec& p, const Vec& u, const Vec& v);

/// Skew matrix dalpha(f_i, f_j) over frame columns, one Jacobian evaluation.
Mat d_on_frame(const OneFormField& alpha, const Vec& p, const Mat& frame);

/// [X, Y](p) = (DY)(p) X(p) - (DX)(p) Y(p).
Vec lie_bracket(const VectorFieldEntity& X, const VectorFieldEntity& Y, const Vec& p,
                double fd_eps = 1e-6);

/// Directional derivative at p of the scalar function q -> alpha_q(Y(q))
/// along u; exact when Y carries jets (used by the Cartan identity check).
double derive_alpha_of_field(const OneFormField& alpha, const VectorFieldEntity& Y,
                             const Vec& p, const Vec& u);

/// Pfaffian of the bordered skew matrix [[0, a^T], [-a, W]] built from
/// a_i = alpha(f_i), W_ij = dalpha(f_i, f_j) over the given frame. Nonzero
/// iff alpha ^ (dalpha)^((n-1)/2) is nonzero on the span; |Pf| is
/// frame-invariant for orthonormal frames.
double bordered_pfaffian(const OneFormField& alpha, const Vec& p, const Mat& frame);

/// Scale against which a bordered Pfaffian should be judged degenerate:
/// (max entry of the bordered matrix)^((n+1)/2), the Pfaffian's homogeneity.
double pfaffian_scale(const OneFormField& alpha, const Vec& p, const Mat& frame);

/// Contact nondegeneracy test at p; dim M must be odd. Throws EvenDimension.
double contact_pfaffian(const OneFormField& alpha, const EmbeddedManifold& M, const Vec& p);

/// Reeb coordinates in an arbitrary frame: solve alpha(R) = 1,
/// dalpha(R, f_i) = 0. Returns the ambient vector. Throws DegenerateContact.
Vec reeb_in_frame(const OneFormField& alpha, const Vec& p, const Mat& frame,
                  double residual_tol = 1e-8);

/// Reeb vector field value at p on M.
Vec reeb(const OneFormField& alpha, const EmbeddedManifold& M, const Vec& p,
         double residual_tol = 1e-8);

/// Reeb as a value-only field (pointwise solve at every evaluation).
VectorFieldEntity reeb_field(const OneFormField& alpha, const EmbeddedManifold& M);

/// RK4 integration of x' = X(t, x) from t0 to t1, optionally retracting onto
/// M after each step and transporting frame columns U by the variational
/// equation U' = DX U (directional derivatives of X, FD for solved fields).
struct FlowResult {
  Vec x;
  Mat U;  // transported columns; empty when none requested
};
FlowResult integrate_ode(const std::function<Vec(double, const Vec&)>& rhs,
                         const Vec& x0, double t0, double t1, int steps,
                         const EmbeddedManifold* retract_on = nullptr,
                         const Mat& U0 = Mat(), double fd_eps = 1e-6);

/// Time-independent flow of a vector field for time t.
FlowResult flow(const VectorFieldEntity& X, const Vec& x0, double t, int steps,
                const EmbeddedManifold* retract_on = nullptr, const Mat& U0 = Mat());

/// Lie derivative of a metric-like tensor along X by central differences of
/// flow pullbacks, returned as the matrix over the supplied tangent columns:
/// result_ij = (L_X g)(U_i, U_j).
Mat lie_derivative_metric(const MetricField& g, const VectorFieldEntity& X,
                          const Vec& p, const Mat& U, double h,
                          const EmbeddedManifold* retract_on = nullptr);

/// Same for a one-form: result_i = (L_X alpha)(U_i).
Vec lie_derivative_oneform(const OneFormField& alpha, const VectorFieldEntity& X,
                           const Vec& p, const Mat& U, double h,
                           const EmbeddedManifold* retract_on = nullptr);

/// alpha = df for a jet-evaluable scalar f with hand-coded jet-evaluable
/// gradient (keeps everything first-order).
OneFormField exact_form(SmoothMap gradient);

/// Conformal rescaling e^f alpha for a jet-evaluable scalar f.
OneFormField conformal_rescale(const OneFormField& alpha, SmoothMap f);

/// Standard contact-type form alpha = i sum(z_j dzbar_j - zbar_j dz_j)
/// = 2 sum(x_j dy_j - y_j dx_j) on R^(2n) with interleaved coordinates.
OneFormField standard_form_cn(int n);

/// alpha = dz - sum y_i dx_i on R^(2n+1), coordinates (x_i, y_i, ..., z).
OneFormField standard_form_r2n1(int n);

}  // namespace cfb::forms
