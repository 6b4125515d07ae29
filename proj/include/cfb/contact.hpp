#pragma once

#include <optional>

#include "cfb/forms.hpp"
#include "cfb/liealg.hpp"

namespace cfb::contact {

using forms::OneFormField;
using geom::EmbeddedManifold;
using geom::SampleSet;
using lie::CoadjointElement;
using lie::GroupAction;

/// A verified co-oriented contact structure: the form itself fixes the
/// positive component of the annihilator bundle.
struct ContactStructure {
  const EmbeddedManifold* M = nullptr;
  OneFormField alpha;
  SampleSet verified_samples;
  double min_abs_pfaffian = 0.0;
};

/// A point of the positive annihilator component, trivialized by the contact
/// form: the covector scale * alpha_m with scale > 0.
struct CoorientedAnnihilatorPoint {
  Vec base_point;
  double scale = 1.0;
};

/// Check dalpha|_ker(alpha) nondegeneracy at every sample via the bordered
/// Pfaffian; records the floor. Throws NotContact with the witness point.
ContactStructure verify_contact(const EmbeddedManifold& M, const OneFormField& alpha,
                                const SampleSet& samples, double pf_tol = 1e-8,
                                int threads = 1);

struct InvarianceReport {
  double max_residual = 0.0;
  bool pass = false;
  std::optional<Vec> witness_point;
  std::optional<Vec> witness_algebra;  // direction whose exp produced the witness
};

/// Strict invariance a(g)^* alpha = alpha over samples and random group
/// elements. Throws nothing; callers decide whether to treat failure as an
/// error.
InvarianceReport verify_invariance(const OneFormField& alpha, const GroupAction& action,
                                   const SampleSet& samples, int group_draws = 20,
                                   uint64_t seed = 1, double tol = 1e-8);

/// alpha-moment map: <result, X_i> = alpha_x((X_i)_M(x)).
CoadjointElement moment_alpha(const OneFormField& alpha, const GroupAction& action,
                              const Vec& x);

/// Scale-homogeneous moment on the positive annihilator:
/// <Psi(m, s alpha_m), X> = s <Psi_alpha(m), X>.
CoadjointElement moment_universal(const OneFormField& alpha, const GroupAction& action,
                                  const CoorientedAnnihilatorPoint& pt);

/// Both sides of dalpha(X_M, Y_M)(x) = -<Psi_alpha(x), [X, Y]>, computed
/// independently.
std::pair<double, double> orbit_two_form_identity(const OneFormField& alpha,
                                                  const GroupAction& action, const Vec& x,
                                                  const Vec& Xcoords, const Vec& Ycoords);

}  // namespace cfb::contact
