#pragma once

#include "cfb/bundles.hpp"
#include "cfb/contact.hpp"

namespace cfb::kcontact {

using bundles::AssociatedContactBundle;
using forms::MetricField;
using forms::OneFormField;
using forms::VectorFieldEntity;
using geom::EmbeddedManifold;
using geom::SampleSet;
using lie::GroupAction;

/// A metric compatible with a contact form: the Reeb direction is unit and
/// orthogonal to xi = ker alpha, and on xi the metric is the polar factor of
/// d(alpha) against a background metric, with d(alpha)|_xi = g(., J.) for
/// the orthogonal complex structure J. All evaluators are pointwise and
/// gauge-free: the frame used internally cancels out of the results.
struct CompatibleMetricField {
  const EmbeddedManifold* space = nullptr;  // manifold carrying the flows
  OneFormField alpha;
  MetricField metric;                      // ambient bilinear matrix
  std::function<Mat(const Vec&)> complex_structure;  // ambient J (zero off xi)
  std::function<Mat(const Vec&)> frame;    // tangent model used (tangent/quotient)
  VectorFieldEntity reeb;
};

/// Build the compatible metric on a plain contact manifold. The background
/// defaults to the ambient-induced metric. Throws PolarBreakdown when the
/// background degenerates on xi.
CompatibleMetricField build_compatible_metric(const EmbeddedManifold& M,
                                              const OneFormField& alpha,
                                              MetricField background = nullptr);

/// Same construction over the quotient frames of an associated bundle;
/// flows retract onto the product total space.
CompatibleMetricField build_compatible_metric(const AssociatedContactBundle& assoc,
                                              MetricField background = nullptr);

/// Pointwise invariants of the construction over samples.
struct MetricInvariantsReport {
  double min_eigenvalue = 0.0;       // of g on the tangent model
  double reeb_unit_residual = 0.0;   // |g(R,R) - 1|
  double reeb_orthogonality = 0.0;   // max |g(R, xi_i)|
  double compatibility_residual = 0.0;  // |dalpha(u,v) - g(u, Jv)|
  double j_squared_residual = 0.0;   // |J^2 + id| on xi
  double j_isometry_residual = 0.0;  // |g(Ju, Jv) - g(u, v)|
};
MetricInvariantsReport verify_metric_invariants(const CompatibleMetricField& field,
                                                const SampleSet& samples, uint64_t seed = 1);

/// max over samples of the sup-norm of L_R g on the tangent model, by
/// central differences of flow pullbacks at step h.
double killing_residual(const CompatibleMetricField& field, const SampleSet& samples,
                        double h, int threads = 1);

/// min over samples of <Psi_alpha(x), X>; strictly positive iff the torus
/// direction X certifies a K-contact-compatible circle action.
struct PositivityReport {
  double min_pairing = 0.0;
  bool pass = false;
};
PositivityReport positivity_check(const OneFormField& alpha, const GroupAction& torus,
                                  const Vec& Xcoords, const SampleSet& samples);

/// max over samples of |dpi(R)| for the Reeb field of the associated form;
/// vanishes when the Reeb field is tangent to fibers.
double reeb_verticality_residual(const AssociatedContactBundle& assoc,
                                 const CompatibleMetricField& field,
                                 const SampleSet& product_samples);

/// Horizontal block of the metric at a product point: the Gram matrix of
/// the A-horizontal lifts of a fixed base frame under the quotient metric.
Mat horizontal_metric_block(const AssociatedContactBundle& assoc,
                            const CompatibleMetricField& field, const Vec& x,
                            const Mat& base_frame);

}  // namespace cfb::kcontact
