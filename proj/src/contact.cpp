#include "cfb/contact.hpp"

namespace cfb::contact {

ContactStructure verify_contact(const EmbeddedManifold& M, const OneFormField& alpha,
                                const SampleSet& samples, double pf_tol, int threads) {
  const int n = samples.count();
  std::vector<double> pf(static_cast<size_t>(n)), scale(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int i) {
    const Vec& p = samples.points[static_cast<size_t>(i)];
    const Mat frame = M.tangent_frame(p).columns;
    pf[static_cast<size_t>(i)] = std::abs(forms::bordered_pfaffian(alpha, p, frame));
    scale[static_cast<size_t>(i)] = forms::pfaffian_scale(alpha, p, frame);
  });
  double floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (pf[static_cast<size_t>(i)] < pf_tol * scale[static_cast<size_t>(i)]) {
      throw NotContact("form degenerates on " + M.name() + " at sample " + std::to_string(i) +
                       " (|Pf| = " + std::to_string(pf[static_cast<size_t>(i)]) + ")");
    }
    floor = std::min(floor, pf[static_cast<size_t>(i)]);
  }
  return {&M, alpha, samples, n ? floor : 0.0};
}

InvarianceReport verify_invariance(const OneFormField& alpha, const GroupAction& action,
                                   const SampleSet& samples, int group_draws, uint64_t seed,
                                   double tol) {
  Rng rng(seed);
  InvarianceReport rep;
  const auto& G = action.group();
  for (int k = 0; k < group_draws; ++k) {
    const Vec dir = rng.normal_vec(G.dim());
    const Mat amb = action.ambient_matrix(G.exp(dir));
    for (const Vec& p : samples.points) {
      // (a(g)^* alpha)_p = amb^T alpha_{g p}
      const Vec pulled = amb.transpose() * alpha.covector(amb * p);
      const double res = (pulled - alpha.covector(p)).norm();
      if (res > rep.max_residual) {
        rep.max_residual = res;
        rep.witness_point = p;
        rep.witness_algebra = dir;
      }
    }
  }
  rep.pass = rep.max_residual <= tol;
  if (rep.pass) {
    rep.witness_point.reset();
    rep.witness_algebra.reset();
  }
  return rep;
}

CoadjointElement moment_alpha(const OneFormField& alpha, const GroupAction& action,
                              const Vec& x) {
  const int d = action.group().dim();
  const Vec a = alpha.covector(x);
  CoadjointElement mu(d);
  for (int i = 0; i < d; ++i) mu[i] = a.dot(action.generators()[static_cast<size_t>(i)] * x);
  return mu;
}

CoadjointElement moment_universal(const OneFormField& alpha, const GroupAction& action,
                                  const CoorientedAnnihilatorPoint& pt) {
  return pt.scale * moment_alpha(alpha, action, pt.base_point);
}

std::pair<double, double> orbit_two_form_identity(const OneFormField& alpha,
                                                  const GroupAction& action, const Vec& x,
                                                  const Vec& Xcoords, const Vec& Ycoords) {
  const Vec xm = action.induced_vector_field(Xcoords, x);
  const Vec ym = action.induced_vector_field(Ycoords, x);
  const double lhs = forms::eval_d(alpha, x, xm, ym);
  const Vec br = action.group().bracket_coords(Xcoords, Ycoords);
  const double rhs = -moment_alpha(alpha, action, x).dot(br);
  return {lhs, rhs};
}

}  // namespace cfb::contact
