#include "cfb/scenarios.hpp"

#include <chrono>

#include "cfb/crosssection.hpp"
#include "cfb/randfields.hpp"
#include "cfb/report.hpp"

namespace cfb::scenarios {

using forms::OneFormField;
using geom::EmbeddedManifold;
using geom::Jet;
using geom::JetVec;
using geom::SampleSet;
using geom::SmoothMap;

geom::SmoothMap hopf_map() {
  // z = (z1, z2) in C^2 -> (2 Re(conj(z1) z2), 2 Im(conj(z1) z2), |z1|^2 - |z2|^2)
  return {4, 3, [](const JetVec& z) {
            const Jet &x1 = z[0], &y1 = z[1], &x2 = z[2], &y2 = z[3];
            return JetVec{Jet(2.0) * (x1 * x2 + y1 * y2), Jet(2.0) * (x1 * y2 - y1 * x2),
                          x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2};
          }};
}

namespace {

// alpha_std / 2 on the first two complex planes of an N-dimensional ambient
// space: the Hopf-type connection component normalized on the generator.
OneFormField half_standard_form(int N) {
  return OneFormField({N, N, [N](const JetVec& z) {
                         JetVec a(static_cast<size_t>(N), Jet(0.0));
                         for (int j = 0; 2 * j + 1 < std::min(N, 4); ++j) {
                           a[static_cast<size_t>(2 * j)] = -z[static_cast<size_t>(2 * j + 1)];
                           a[static_cast<size_t>(2 * j + 1)] = z[static_cast<size_t>(2 * j)];
                         }
                         return a;
                       }});
}

// Angular form of the circle factor living at coordinates (i, i+1).
OneFormField angular_form(int N, int i) {
  return OneFormField({N, N, [N, i](const JetVec& x) {
                         JetVec a(static_cast<size_t>(N), Jet(0.0));
                         a[static_cast<size_t>(i)] = -x[static_cast<size_t>(i + 1)];
                         a[static_cast<size_t>(i + 1)] = x[static_cast<size_t>(i)];
                         return a;
                       }});
}

// Sum of two one-forms.
OneFormField sum_forms(const OneFormField& a, const OneFormField& b) {
  const SmoothMap ca = a.coefficients(), cb = b.coefficients();
  const int N = ca.in_dim();
  return OneFormField({N, N, [ca, cb](const JetVec& x) {
                         JetVec va = ca(x);
                         const JetVec vb = cb(x);
                         for (size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
                         return va;
                       }});
}

}  // namespace

HopfBundle::HopfBundle() {
  Eigen::MatrixXi w(1, 2);
  w << 1, 1;
  action = lie::torus_action(&group, &total, w);
  bundle.name = "hopf";
  bundle.P = &total;
  bundle.G = &group;
  bundle.action = action;
  bundle.B = &base;
  bundle.projection = hopf_map();
  bundle.connection = {half_standard_form(4)};
}

TrivialCircleBundle::TrivialCircleBundle()
    : total(geom::product_manifold("S2xS1", geom::sphere(3), geom::sphere(2))) {
  Eigen::MatrixXi w(1, 1);
  w << 1;
  action = lie::torus_action(&group, &total, w, {{3, 4}});
  bundle.name = "trivial_s2xs1";
  bundle.P = &total;
  bundle.G = &group;
  bundle.action = action;
  bundle.B = &base;
  bundle.projection = SmoothMap(5, 3, [](const JetVec& x) {
    return JetVec{x[0], x[1], x[2]};
  });
  bundle.connection = {angular_form(5, 3)};
}

FiberProductBundle::FiberProductBundle(bool twisted)
    : total(geom::product_manifold("S3xS1", geom::sphere(4), geom::sphere(2))) {
  Eigen::MatrixXi w(2, 3);
  if (twisted)
    w << 1, 1, -1, 0, 0, 1;
  else
    w << 1, 1, 0, 0, 0, 1;
  action = lie::torus_action(&group, &total, w);
  bundle.name = twisted ? "fiber_product_t2" : "fiber_product_t2_flat_factor";
  bundle.P = &total;
  bundle.G = &group;
  bundle.action = action;
  bundle.B = &base;
  const SmoothMap hopf = hopf_map();
  bundle.projection = SmoothMap(6, 3, [hopf](const JetVec& x) {
    return hopf(JetVec(x.begin(), x.begin() + 4));
  });
  const OneFormField a_u = half_standard_form(6);
  const OneFormField a_l = angular_form(6, 4);
  if (twisted)
    bundle.connection = {a_u, sum_forms(a_u, a_l)};
  else
    bundle.connection = {a_u, a_l};
}

AssociatedScenario::AssociatedScenario(const bundles::PrincipalBundle& bundle,
                                       const Vec& ellipsoid_params, uint64_t invariance_seed)
    : fiber(geom::ellipsoid(ellipsoid_params)),
      alpha_F(forms::standard_form_cn(static_cast<int>(ellipsoid_params.size()))) {
  const int n = static_cast<int>(ellipsoid_params.size());
  const int dg = bundle.G->dim();
  Eigen::MatrixXi w(dg, n);
  if (dg == 1) {
    w.setOnes();  // diagonal circle
  } else {
    w.setZero();
    for (int i = 0; i < std::min(dg, n); ++i) w(i, i) = 1;
  }
  fiber_action = lie::torus_action(bundle.G, &fiber, w);
  assoc = bundles::assemble_alpha_tot(bundle, fiber, alpha_F, fiber_action,
                                      fiber.sample(30, invariance_seed));
}

std::vector<lie::CoadjointElement> moment_image_set(const AssociatedScenario& scen,
                                                    int fiber_samples, uint64_t seed) {
  std::vector<lie::CoadjointElement> mu_set;
  for (const Vec& f : scen.fiber.sample(fiber_samples, seed).points)
    mu_set.push_back(contact::moment_alpha(scen.alpha_F, scen.fiber_action, f));
  // simplex vertices: fiber points supported on a single complex plane
  const int n = scen.fiber.ambient_dim() / 2;
  for (int j = 0; j < n; ++j) {
    Vec f = Vec::Zero(scen.fiber.ambient_dim());
    f[2 * j] = 1.0;
    f = scen.fiber.retract(f);
    mu_set.push_back(contact::moment_alpha(scen.alpha_F, scen.fiber_action, f));
  }
  return mu_set;
}

geom::SampleSet product_samples_with_fiber_probe(const bundles::AssociatedContactBundle& assoc,
                                                 int count, uint64_t seed,
                                                 const Vec& probe_fiber) {
  SampleSet samples = assoc.total.sample(count, seed);
  const int NP = assoc.bundle->P->ambient_dim();
  Vec probe(NP + assoc.F->ambient_dim());
  probe.head(NP) = samples.points[0].head(NP);
  probe.tail(assoc.F->ambient_dim()) = probe_fiber;
  samples.points.push_back(std::move(probe));
  return samples;
}

}  // namespace cfb::scenarios

namespace cfb::runner {

namespace {

using bundles::AssociatedContactBundle;
using forms::OneFormField;
using geom::EmbeddedManifold;
using geom::Jet;
using geom::JetVec;
using geom::SampleSet;
using geom::SmoothMap;
using scenarios::AssociatedScenario;
using scenarios::FiberProductBundle;
using scenarios::HopfBundle;
using scenarios::TrivialCircleBundle;

void add(ReportDocument& doc, const std::string& name, bool pass, const std::string& kind,
         double value, const std::string& note = "",
         std::optional<Vec> witness = std::nullopt) {
  doc.checks.push_back({name, pass, kind, value, note, std::move(witness)});
}

// Residual of the Reeb defining system, recomputed against a fresh frame.
double reeb_defect(const OneFormField& alpha, const EmbeddedManifold& M, const Vec& p) {
  const Vec R = forms::reeb(alpha, M, p);
  const Mat F = M.tangent_frame(p).columns;
  double worst = std::abs(alpha(p, R) - 1.0);
  for (int i = 0; i < F.cols(); ++i)
    worst = std::max(worst, std::abs(forms::eval_d(alpha, p, R, F.col(i))));
  return worst;
}

ReportDocument run_std_contact(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  const int n = config.samples > 0 ? config.samples : 500;

  struct Case {
    std::string name;
    EmbeddedManifold M;
    OneFormField alpha;
  };
  std::vector<Case> cases;
  cases.push_back({"r3", geom::euclidean_space(3), forms::standard_form_r2n1(1)});
  cases.push_back({"r5", geom::euclidean_space(5), forms::standard_form_r2n1(2)});
  cases.push_back({"r7", geom::euclidean_space(7), forms::standard_form_r2n1(3)});
  cases.push_back({"s1", geom::sphere(2), forms::standard_form_cn(1)});
  cases.push_back({"s3", geom::sphere(4), forms::standard_form_cn(2)});
  cases.push_back({"s5", geom::sphere(6), forms::standard_form_cn(3)});
  cases.push_back({"ea2", geom::ellipsoid((Vec(2) << 1, 2).finished()),
                   forms::standard_form_cn(2)});
  cases.push_back({"ea3", geom::ellipsoid((Vec(3) << 1, 2, 3).finished()),
                   forms::standard_form_cn(3)});

  for (const auto& c : cases) {
    const SampleSet samples = c.M.sample(n, config.seed);
    try {
      const auto C = contact::verify_contact(c.M, c.alpha, samples, config.tol.pf, threads);
      add(doc, "contact_" + c.name, true, "floor", C.min_abs_pfaffian);
    } catch (const NotContact& e) {
      add(doc, "contact_" + c.name, false, "floor", 0.0, e.what());
    }
  }

  // Reeb solve residuals at full sample count
  for (const auto& c : cases) {
    if (c.name != "s3" && c.name != "s5" && c.name != "ea3") continue;
    const SampleSet samples = c.M.sample(n, config.seed + 1);
    std::vector<double> defect(static_cast<size_t>(samples.count()));
    parallel_for(samples.count(), threads,
                 [&](int i) { defect[static_cast<size_t>(i)] = reeb_defect(c.alpha, c.M, samples.points[static_cast<size_t>(i)]); });
    double worst = 0.0;
    for (double d : defect) worst = std::max(worst, d);
    add(doc, "reeb_residual_" + c.name, worst <= 1e-8, "residual", worst);
  }

  // exterior-calculus core: d(df) = 0, Cartan, jets vs finite differences
  {
    Rng rng(config.seed + 2);
    const int dim = 4, fields = 20, points = 100;
    double dd = 0.0, cartan = 0.0, jetfd = 0.0;
    for (int t = 0; t < fields; ++t) {
      const auto sf = forms::random_scalar_field(rng, dim, 5);
      const OneFormField df = forms::exact_form(sf.grad);
      const OneFormField beta = forms::random_oneform(rng, dim);
      const forms::VectorFieldEntity X = forms::random_field(rng, dim);
      const forms::VectorFieldEntity Y = forms::random_field(rng, dim);
      for (int s = 0; s < points; ++s) {
        const Vec p = rng.normal_vec(dim), u = rng.normal_vec(dim), v = rng.normal_vec(dim);
        dd = std::max(dd, std::abs(forms::eval_d(df, p, u, v)));
        const double lhs = forms::eval_d(beta, p, X(p), Y(p));
        const double rhs = forms::derive_alpha_of_field(beta, Y, p, X(p)) -
                           forms::derive_alpha_of_field(beta, X, p, Y(p)) -
                           beta(p, forms::lie_bracket(X, Y, p));
        cartan = std::max(cartan, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        // jets against central differences of f
        const Mat J = sf.f.jacobian(p);
        const double h = 1e-6;
        for (int i = 0; i < dim; ++i) {
          Vec pp = p, pm = p;
          pp[i] += h;
          pm[i] -= h;
          const double fd = (sf.f.value(pp)[0] - sf.f.value(pm)[0]) / (2 * h);
          jetfd = std::max(jetfd, std::abs(J(0, i) - fd) / std::max(1.0, std::abs(fd)));
        }
      }
    }
    add(doc, "dd_zero_residual", dd <= 1e-9, "residual", dd);
    add(doc, "cartan_residual", cartan <= 1e-7, "residual", cartan);
    add(doc, "jet_vs_fd_residual", jetfd <= 1e-5, "residual", jetfd);
  }
  return doc;
}

ReportDocument run_hopf_fatness(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  const int n = config.samples > 0 ? config.samples : 100;
  HopfBundle hopf;
  const SampleSet samples = hopf.total.sample(n, config.seed);

  const auto conn = bundles::verify_connection(hopf.bundle, samples, 10, config.seed + 1);
  add(doc, "connection_generators", conn.generator_residual <= 1e-9, "residual",
      conn.generator_residual);
  add(doc, "connection_equivariance", conn.equivariance_residual <= 1e-8, "residual",
      conn.equivariance_residual);
  add(doc, "projection_rank", conn.min_projection_rank == hopf.base.dim(), "count",
      conn.min_projection_rank);

  // curvature magnitude on orthonormal horizontal frames (constant 2)
  {
    double lo = 1e300, hi = 0.0;
    for (const Vec& p : samples.points) {
      const Mat H = hopf.bundle.horizontal_frame(p);
      const double c = std::abs(bundles::curvature_structure_eq(hopf.bundle, p, H.col(0), H.col(1))[0]);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    add(doc, "curvature_magnitude", lo >= 1.9 && hi <= 2.1, "value", lo,
        "horizontal pairing of the curvature, constant 2 on the unit sphere");
  }

  // structure equation against the bracket definition (sign convention:
  // A([u#,v#]) = -Curv(u#,v#) for the structure-equation curvature)
  {
    Rng rng(config.seed + 2);
    double worst = 0.0;
    const int m = std::min(n, 100);
    for (int i = 0; i < m; ++i) {
      const Vec& p = samples.points[static_cast<size_t>(i)];
      const Vec b = hopf.bundle.projection.value(p);
      const Mat Tb = hopf.base.tangent_frame(b).columns;
      const Vec uh = Tb * rng.normal_vec(2), vh = Tb * rng.normal_vec(2);
      const Vec V = bundles::curvature_bracket_def(hopf.bundle, uh, vh, p);
      const Vec from_bracket = hopf.bundle.connection_value(p, V);
      const Vec from_structure = bundles::curvature_structure_eq(
          hopf.bundle, p, hopf.bundle.horizontal_lift(p, uh), hopf.bundle.horizontal_lift(p, vh));
      worst = std::max(worst, (from_bracket + from_structure).cwiseAbs().maxCoeff() /
                                  std::max(1.0, from_structure.cwiseAbs().maxCoeff()));
    }
    add(doc, "curvature_cross_validation", worst <= 1e-6, "residual", worst);
  }

  const SampleSet fat_samples = hopf.total.sample(std::min(n, 50), config.seed + 3);
  const auto fat1 = bundles::fatness_check(hopf.bundle, {(Vec(1) << 1.0).finished()},
                                           fat_samples, config.tol.fat, threads);
  add(doc, "fatness_mu_one", fat1.pass, "floor", fat1.min_rel_det);
  const auto fat2 = bundles::fatness_check(hopf.bundle, {(Vec(1) << -3.0).finished()},
                                           fat_samples, config.tol.fat, threads);
  add(doc, "fatness_mu_rescaled", fat2.pass, "floor", fat2.min_rel_det);

  // PASS/FAIL invariance under mu -> a Ad'(g) mu, a > 0
  {
    bool consistent = true;
    for (double a : {0.1, 1.0, 10.0}) {
      const auto f = bundles::fatness_check(hopf.bundle, {(Vec(1) << a).finished()},
                                            fat_samples, config.tol.fat, threads);
      consistent = consistent && (f.pass == fat1.pass);
    }
    add(doc, "fatness_scale_invariance", consistent, "value", consistent ? 1.0 : 0.0);
  }
  return doc;
}

ReportDocument run_assoc_contact(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  const int n = config.samples > 0 ? config.samples : 500;
  HopfBundle hopf;
  const Vec a = (Vec(2) << 1, 2).finished();

  // fiber form invariance (also enforced inside the assembly)
  {
    const EmbeddedManifold fiber = geom::ellipsoid(a);
    Eigen::MatrixXi w(1, 2);
    w << 1, 1;
    const auto act = lie::torus_action(&hopf.group, &fiber, w);
    const auto inv = contact::verify_invariance(forms::standard_form_cn(2), act,
                                                fiber.sample(30, config.seed), 20,
                                                config.seed + 1, config.tol.invariance);
    add(doc, "fiber_form_invariance", inv.pass, "residual", inv.max_residual);
  }

  AssociatedScenario scen(hopf.bundle, a, config.seed);
  const SampleSet samples = scen.assoc.total.sample(n, config.seed + 2);

  const double basic = bundles::basicness_residual(scen.assoc, samples);
  add(doc, "alpha_tot_basic", basic <= config.tol.basic, "residual", basic);

  // fiber restriction is alpha_F on the nose
  {
    double worst = 0.0;
    const int NP = hopf.total.ambient_dim();
    for (const Vec& x : samples.points) {
      const Vec tot = scen.assoc.alpha_tot.covector(x).tail(scen.fiber.ambient_dim());
      const Vec fib = scen.alpha_F.covector(x.tail(scen.fiber.ambient_dim()));
      worst = std::max(worst, (tot - fib).cwiseAbs().maxCoeff());
    }
    (void)NP;
    add(doc, "fiber_restriction_exact", worst == 0.0, "residual", worst);
  }

  const auto contact_rep =
      bundles::verify_contact_associated(scen.assoc, samples, config.tol.pf, threads);
  add(doc, "assoc_contact_floor", contact_rep.pass, "floor", contact_rep.min_abs_pfaffian,
      "", contact_rep.witness_point);

  const double sigma = bundles::sigma_pairing_residual(
      scen.assoc, scen.assoc.total.sample(70, config.seed + 3), {0.01, 1.0, 100.0},
      config.seed + 4);
  add(doc, "sigma_pairing_identity", sigma <= 1e-6, "residual", sigma);

  const auto mu_set = scenarios::moment_image_set(scen, 50, config.seed + 5);
  const auto fat = bundles::fatness_check(hopf.bundle, mu_set,
                                          hopf.total.sample(50, config.seed + 6),
                                          config.tol.fat, threads);
  add(doc, "fatness_at_moment_image", fat.pass, "floor", fat.min_rel_det);
  add(doc, "fatness_iff_contact", fat.pass == contact_rep.pass, "value",
      (fat.pass == contact_rep.pass) ? 1.0 : 0.0);
  return doc;
}

ReportDocument run_parallel_transport(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  (void)threads;
  HopfBundle hopf;
  AssociatedScenario scen(hopf.bundle, (Vec(2) << 1, 2).finished(), config.seed);
  const int n = config.samples > 0 ? config.samples : 20;
  const SampleSet samples = scen.assoc.total.sample(n, config.seed + 1);

  // the canonical connection of the distribution matches the induced one
  {
    double worst = 0.0;
    for (const Vec& x : samples.points) {
      const Mat Q = scen.assoc.quotient_frame(x);
      const Mat V = scen.assoc.vertical_subspace(x, Q);
      const Mat Hc = bundles::contact_connection(scen.assoc.alpha_tot, x, Q, V);
      const Mat Hi = bundles::induced_horizontal_subspace(scen.assoc, x);
      worst = std::max(worst, linalg::max_principal_angle(Hc, Hi));
    }
    add(doc, "contact_connection_matches_induced", worst <= 1e-7, "residual", worst);
  }

  // conformal invariance of the connection
  {
    const int N = scen.assoc.total.ambient_dim();
    const SmoothMap f(N, 1, [](const JetVec& x) {
      return JetVec{Jet(0.25) * x[0] + Jet(0.3) * sin(x[5])};
    });
    const OneFormField scaled = forms::conformal_rescale(scen.assoc.alpha_tot, f);
    double worst = 0.0;
    for (const Vec& x : samples.points) {
      const Mat Q = scen.assoc.quotient_frame(x);
      const Mat V = scen.assoc.vertical_subspace(x, Q);
      const Mat H0 = bundles::contact_connection(scen.assoc.alpha_tot, x, Q, V);
      const Mat H1 = bundles::contact_connection(scaled, x, Q, V);
      worst = std::max(worst, linalg::max_principal_angle(H0, H1));
    }
    add(doc, "conformal_connection_invariance", worst <= 1e-7, "residual", worst);
  }

  // equatorial loop transport from a fiber over gamma(0) = (1, 0, 0)
  {
    Vec p0(4);
    p0 << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0), 0.0;
    Vec x0(4 + 4);
    x0.head(4) = p0;
    x0.tail(4) = scen.fiber.sample(1, config.seed + 2).points[0];
    const auto path = bundles::equatorial_loop(3);
    const auto check = bundles::check_fiber_transport(scen.assoc, path, x0, 1000);
    add(doc, "transport_endpoint", check.base_tracking_error <= 1e-6, "residual",
        check.base_tracking_error);
    add(doc, "transport_hyperplane_angle", check.hyperplane_angle <= 1e-4, "residual",
        check.hyperplane_angle);
    add(doc, "transport_coorientation", check.coorientation_value > 0.0, "value",
        check.coorientation_value);

    // constant path is the identity
    const bundles::BasePath constant{[](double) { return (Vec(3) << 1, 0, 0).finished(); },
                                     [](double) { return Vec::Zero(3); }};
    const auto fixed = bundles::parallel_transport(scen.assoc, constant, x0, 50);
    add(doc, "transport_constant_path", (fixed.end_point - x0).norm() <= 1e-9, "residual",
        (fixed.end_point - x0).norm());
  }

  // flat product bundle: transport around a loop fixes the whole fiber
  {
    TrivialCircleBundle flat;
    AssociatedScenario fscen(flat.bundle, (Vec(2) << 1, 2).finished(), config.seed);
    Vec x0(5 + 4);
    x0.head(3) = (Vec(3) << 1, 0, 0).finished();
    x0.segment(3, 2) = (Vec(2) << 1, 0).finished();
    x0.tail(4) = fscen.fiber.sample(1, config.seed + 3).points[0];
    const auto path = bundles::equatorial_loop(3);
    const auto res = bundles::parallel_transport(fscen.assoc, path, x0, 1000);
    add(doc, "flat_transport_fixes_fiber", (res.end_point - x0).norm() <= 1e-6, "residual",
        (res.end_point - x0).norm());
  }
  return doc;
}

void yamazaki_common(ReportDocument& doc, const ScenarioConfig& config, int threads,
                     const bundles::PrincipalBundle& bundle, const AssociatedScenario& scen) {
  const int n = config.samples > 0 ? config.samples : 200;

  const auto mu_set = scenarios::moment_image_set(scen, 50, config.seed);
  const auto fat = bundles::fatness_check(bundle, mu_set,
                                          bundle.P->sample(50, config.seed + 1),
                                          config.tol.fat, threads);
  add(doc, "fatness_at_moment_image", fat.pass, "floor", fat.min_rel_det);

  const SampleSet samples = scen.assoc.total.sample(n, config.seed + 2);
  const auto contact_rep =
      bundles::verify_contact_associated(scen.assoc, samples, config.tol.pf, threads);
  add(doc, "assoc_contact_floor", contact_rep.pass, "floor", contact_rep.min_abs_pfaffian);
  add(doc, "fatness_iff_contact", fat.pass == contact_rep.pass, "value",
      (fat.pass == contact_rep.pass) ? 1.0 : 0.0);

  const auto metric = kcontact::build_compatible_metric(scen.assoc);
  const SampleSet msamples = scen.assoc.total.sample(30, config.seed + 3);
  const auto inv = kcontact::verify_metric_invariants(metric, msamples, config.seed + 4);
  add(doc, "metric_positive", inv.min_eigenvalue > 0.0, "floor", inv.min_eigenvalue);
  add(doc, "metric_compatibility", inv.compatibility_residual <= 1e-8, "residual",
      inv.compatibility_residual);
  add(doc, "metric_reeb_unit", inv.reeb_unit_residual <= 1e-8, "residual",
      inv.reeb_unit_residual);
  add(doc, "metric_reeb_orthogonal", inv.reeb_orthogonality <= 1e-8, "residual",
      inv.reeb_orthogonality);
  add(doc, "metric_j_squared", inv.j_squared_residual <= 1e-9, "residual",
      inv.j_squared_residual);

  const SampleSet ksamples = scen.assoc.total.sample(10, config.seed + 5);
  const double killing = kcontact::killing_residual(metric, ksamples, 1e-3, threads);
  add(doc, "killing_residual", killing <= 1e-4, "residual", killing);

  const double vert = kcontact::reeb_verticality_residual(scen.assoc, metric, samples);
  add(doc, "reeb_vertical", vert <= 1e-7, "residual", vert);
}

ReportDocument run_yamazaki_n1(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  HopfBundle hopf;
  AssociatedScenario scen(hopf.bundle, (Vec(2) << 1, 1).finished(), config.seed);
  yamazaki_common(doc, config, threads, hopf.bundle, scen);
  return doc;
}

ReportDocument run_yamazaki_n2(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  FiberProductBundle fp(true);
  const Vec a = (Vec(2) << 1, 2).finished();
  AssociatedScenario scen(fp.bundle, a, config.seed);
  add(doc, "quotient_dimension", scen.assoc.quotient_dim() == 5, "count",
      scen.assoc.quotient_dim());
  yamazaki_common(doc, config, threads, fp.bundle, scen);

  // the moment image is the segment {a . t = 2, t >= 0}
  {
    double worst = 0.0;
    double min_coord = 0.0;
    for (const auto& mu : scenarios::moment_image_set(scen, 100, config.seed + 6)) {
      worst = std::max(worst, std::abs(a.dot(mu) - 2.0));
      min_coord = std::min(min_coord, mu.minCoeff());
    }
    add(doc, "moment_simplex_segment", worst <= 1e-9 && min_coord >= -1e-12, "residual",
        worst);
  }

  // the horizontal metric block varies along the fiber
  {
    const auto metric = kcontact::build_compatible_metric(scen.assoc);
    const Vec p0 = fp.total.sample(1, config.seed + 7).points[0];
    Vec f1 = Vec::Zero(4), f2 = Vec::Zero(4);
    f1[0] = 1.0;                      // z1 axis vertex
    f2[2] = 1.0 / std::sqrt(2.0);     // z2 axis vertex of E_(1,2)
    Vec x1(10), x2(10);
    x1 << p0, f1;
    x2 << p0, f2;
    const Vec b = fp.bundle.projection.value(p0);
    const Mat Tb = fp.base.tangent_frame(b).columns;
    const Mat B1 = kcontact::horizontal_metric_block(scen.assoc, metric, x1, Tb);
    const Mat B2 = kcontact::horizontal_metric_block(scen.assoc, metric, x2, Tb);
    const double diff = (B1 - B2).norm();
    add(doc, "horizontal_metric_fiber_dependence", diff > 1e-3, "value", diff);
  }
  return doc;
}

ReportDocument run_kcontact_killing(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  const int n = config.samples > 0 ? config.samples : 100;

  const EmbeddedManifold s3 = geom::sphere(4);
  const OneFormField alpha = forms::standard_form_cn(2);
  const auto metric = kcontact::build_compatible_metric(s3, alpha);
  const auto inv = kcontact::verify_metric_invariants(metric, s3.sample(n, config.seed));
  add(doc, "s3_metric_positive", inv.min_eigenvalue > 0.0, "floor", inv.min_eigenvalue);
  add(doc, "s3_metric_compatibility", inv.compatibility_residual <= 1e-8, "residual",
      inv.compatibility_residual);
  add(doc, "s3_metric_j_squared", inv.j_squared_residual <= 1e-9, "residual",
      inv.j_squared_residual);
  const double killing =
      kcontact::killing_residual(metric, s3.sample(15, config.seed + 1), 1e-3, threads);
  add(doc, "s3_killing_residual", killing <= 1e-5, "residual", killing);

  const EmbeddedManifold r3 = geom::euclidean_space(3);
  const auto m3 = kcontact::build_compatible_metric(r3, forms::standard_form_r2n1(1));
  const double k3 = kcontact::killing_residual(m3, r3.sample(10, config.seed + 2), 1e-3, threads);
  add(doc, "r3_killing_residual", k3 <= 1e-8, "residual", k3);

  // torus positivity on the ellipsoid: the Reeb generator pairs to one
  const Vec a = (Vec(2) << 1, 2).finished();
  const EmbeddedManifold ea = geom::ellipsoid(a);
  const lie::MatrixLieGroup t2 = lie::torus_group(2);
  Eigen::MatrixXi w(2, 2);
  w << 1, 0, 0, 1;
  const auto act = lie::torus_action(&t2, &ea, w);
  const OneFormField alpha_a = forms::standard_form_cn(2);
  const SampleSet esamples = ea.sample(n, config.seed + 3);
  const auto pos = kcontact::positivity_check(alpha_a, act, 0.5 * a, esamples);
  add(doc, "positivity_floor", pos.pass, "floor", pos.min_pairing,
      "pairing with the Reeb torus direction");

  // sign of the floor is conformally invariant for invariant factors
  {
    const SmoothMap f(4, 1, [](const JetVec& z) {
      return JetVec{Jet(0.3) * (z[0] * z[0] + z[1] * z[1])};
    });
    const auto pos2 =
        kcontact::positivity_check(forms::conformal_rescale(alpha_a, f), act, 0.5 * a, esamples);
    add(doc, "positivity_conformal_sign", pos2.pass == pos.pass, "value", pos2.min_pairing);
  }
  return doc;
}

ReportDocument run_cross_section(const ScenarioConfig& config, int threads, bool on_s5) {
  ReportDocument doc;
  (void)threads;
  const lie::MatrixLieGroup su2 = lie::su2_group();
  const EmbeddedManifold M = on_s5 ? geom::sphere(6) : geom::sphere(4);
  const OneFormField alpha = forms::standard_form_cn(on_s5 ? 3 : 2);
  const lie::GroupAction action =
      on_s5 ? lie::su2_action_first_two(&su2, &M) : lie::su2_action_s3(&su2, &M);
  const lie::CoadjointElement mu = Vec::Unit(3, 2);
  const auto slice = xsection::build_slice(su2, mu);

  add(doc, "slice_dimensions",
      slice.isotropy.cols() == 1 && slice.complement.cols() == 2, "count",
      slice.complement.cols());
  const double mu_on_m = slice.m_components(mu).cwiseAbs().maxCoeff();
  add(doc, "mu_annihilates_complement", mu_on_m <= 1e-12, "residual", mu_on_m);

  {
    double floor = std::numeric_limits<double>::infinity();
    for (double t : {0.5, 1.0, 2.0})
      floor = std::min(floor, xsection::slice_pairing_check(su2, slice, t * mu) / t);
    add(doc, "slice_pairing_nondegenerate", floor > 1e-8, "floor", floor);
  }

  const int count = config.samples > 0 ? config.samples : (on_s5 ? 50 : 20);
  const auto samples =
      xsection::find_cross_section(M, alpha, action, slice, count, config.seed);
  double membership = 0.0;
  for (const auto& s : samples) membership = std::max(membership, s.membership_residual);
  add(doc, "membership_residual", membership <= 1e-8, "residual", membership);

  const int expected_dim = M.dim() - (su2.dim() - static_cast<int>(slice.isotropy.cols()));
  int frame_dim = -1;
  double split_a = 0.0, split_c = 0.0, bracket = 0.0;
  bool split_b = true;
  for (const auto& s : samples) {
    const Mat RF = xsection::cross_section_frame(M, alpha, action, slice, s.x);
    if (frame_dim < 0) frame_dim = static_cast<int>(RF.cols());
    if (static_cast<int>(RF.cols()) != frame_dim) split_b = false;
    const auto rep = xsection::verify_splitting(M, alpha, action, slice, s.x);
    split_a = std::max(split_a, rep.orbit_in_xi_residual);
    split_c = std::max(split_c, rep.dalpha_orthogonality);
    split_b = split_b && rep.dimensions_match;
    bracket = std::max(bracket, xsection::bracket_pairing_residual(alpha, action, slice, s.x));
  }
  add(doc, "dim_R", frame_dim == expected_dim, "count", frame_dim,
      "dim M - dim(G.mu) = " + std::to_string(expected_dim));
  add(doc, "splitting_orbit_in_xi", split_a <= 1e-8, "residual", split_a);
  add(doc, "splitting_direct_sum", split_b, "value", split_b ? 1.0 : 0.0);
  add(doc, "splitting_dalpha_orthogonal", split_c <= 1e-7, "residual", split_c);
  add(doc, "bracket_pairing_identity", bracket <= 1e-7, "residual", bracket);

  const auto ctc = xsection::verify_cross_section_contact(M, alpha, action, slice, samples,
                                                          config.tol.pf, config.seed + 1);
  add(doc, "cross_section_contact_floor", ctc.pass, "floor", ctc.min_abs_pfaffian);
  add(doc, "conformal_membership_invariance",
      ctc.conformal_membership_residual <= 1e-7, "residual",
      ctc.conformal_membership_residual);

  const double gmu = xsection::isotropy_invariance_residual(M, alpha, action, slice, samples,
                                                            10, config.seed + 2);
  add(doc, "gmu_invariance", gmu <= 1e-7, "residual", gmu);
  return doc;
}

ReportDocument run_negative_controls(const ScenarioConfig& config, int threads) {
  ReportDocument doc;
  const int n = config.samples > 0 ? config.samples : 50;

  // a nowhere-contact form: every sample is a witness
  {
    const EmbeddedManifold r3 = geom::euclidean_space(3);
    const OneFormField dz(SmoothMap(3, 3, [](const JetVec&) {
      return JetVec{Jet(0.0), Jet(0.0), Jet(1.0)};
    }));
    const SampleSet samples = r3.sample(n, config.seed);
    double floor = std::numeric_limits<double>::infinity();
    for (const Vec& p : samples.points)
      floor = std::min(floor, std::abs(forms::contact_pfaffian(dz, r3, p)));
    add(doc, "dz_not_contact", false, "floor", floor, "degenerate everywhere",
        samples.points[0]);
  }

  TrivialCircleBundle flat;
  const Vec a = (Vec(2) << 1, 2).finished();

  // flat connection: fatness fails for every nonzero covector
  {
    const auto fat = bundles::fatness_check(flat.bundle, {(Vec(1) << 1.0).finished()},
                                            flat.total.sample(n, config.seed + 1),
                                            config.tol.fat, threads);
    add(doc, "flat_fatness", fat.pass, "floor", fat.min_rel_det, "flat connection",
        fat.witness_point);
  }

  // ... and the associated form is nowhere contact in horizontal directions
  {
    AssociatedScenario fscen(flat.bundle, a, config.seed + 2);
    const auto rep = bundles::verify_contact_associated(
        fscen.assoc, fscen.assoc.total.sample(n, config.seed + 3), config.tol.pf, threads);
    add(doc, "flat_assoc_contact", rep.pass, "floor", rep.min_abs_pfaffian,
        "flat connection times contact fiber", rep.witness_point);
  }

  // non-invariant fiber form is rejected with a witness
  {
    const EmbeddedManifold fiber = geom::ellipsoid(a);
    const SmoothMap base = forms::standard_form_cn(2).coefficients();
    const OneFormField crooked(SmoothMap(4, 4, [base](const JetVec& x) {
      JetVec v = base(x);
      v[2] += x[0];
      return v;
    }));
    Eigen::MatrixXi w(1, 2);
    w << 1, 1;
    const auto act = lie::torus_action(&flat.group, &fiber, w);
    const auto inv = contact::verify_invariance(crooked, act, fiber.sample(30, config.seed + 4),
                                                20, config.seed + 5, config.tol.invariance);
    add(doc, "noninvariant_fiber_form", inv.pass, "residual", inv.max_residual,
        "perturbed fiber form", inv.witness_point);
  }

  // zero covector kills fatness
  {
    HopfBundle hopf;
    const auto fat = bundles::fatness_check(hopf.bundle, {Vec::Zero(1)},
                                            hopf.total.sample(20, config.seed + 6),
                                            config.tol.fat, threads);
    add(doc, "zero_mu_fatness", fat.pass, "floor", fat.min_rel_det, "mu = 0");
  }

  // positivity fails for the reversed and zero torus directions
  {
    const EmbeddedManifold ea = geom::ellipsoid(a);
    const lie::MatrixLieGroup t2 = lie::torus_group(2);
    Eigen::MatrixXi w(2, 2);
    w << 1, 0, 0, 1;
    const auto act = lie::torus_action(&t2, &ea, w);
    const OneFormField alpha_a = forms::standard_form_cn(2);
    const SampleSet esamples = ea.sample(n, config.seed + 7);
    const auto neg = kcontact::positivity_check(alpha_a, act, -0.5 * a, esamples);
    add(doc, "positivity_negative_generator", neg.pass, "floor", neg.min_pairing);
    const auto zero = kcontact::positivity_check(alpha_a, act, Vec::Zero(2), esamples);
    add(doc, "positivity_zero_generator", zero.pass, "floor", zero.min_pairing);
  }

  // a background that the Reeb flow does not preserve breaks the Killing
  // property while the pointwise metric invariants still hold
  {
    const EmbeddedManifold s3 = geom::sphere(4);
    const forms::MetricField skew_bg = [](const Vec&) {
      Vec d(4);
      d << 1.0, 2.0, 1.0, 1.0;
      return Mat(d.asDiagonal());
    };
    const auto metric = kcontact::build_compatible_metric(s3, forms::standard_form_cn(2), skew_bg);
    const double killing =
        kcontact::killing_residual(metric, s3.sample(10, config.seed + 8), 1e-3, threads);
    add(doc, "reeb_breaking_killing", killing <= 1e-4, "residual", killing,
        "background not Reeb-invariant");
  }

  // fiber-product bundle with one flat factor: fatness and contactness fail
  // at matched witnesses (the z1 = 0 vertex of the moment image)
  {
    FiberProductBundle fp(false);
    AssociatedScenario fscen(fp.bundle, a, config.seed + 9);
    const auto mu_set = scenarios::moment_image_set(fscen, 30, config.seed + 10);
    const auto fat = bundles::fatness_check(fp.bundle, mu_set,
                                            fp.total.sample(30, config.seed + 11),
                                            config.tol.fat, threads);
    add(doc, "yamazaki_flat_factor_fatness", fat.pass, "floor", fat.min_rel_det,
        "second curvature component vanishes", fat.witness_mu);

    Vec probe = Vec::Zero(4);
    probe[2] = 1.0 / std::sqrt(2.0);  // z2-axis point of E_(1,2), moment (0, 1)
    const auto samples = scenarios::product_samples_with_fiber_probe(
        fscen.assoc, 30, config.seed + 12, probe);
    const auto rep =
        bundles::verify_contact_associated(fscen.assoc, samples, config.tol.pf, threads);
    add(doc, "yamazaki_flat_factor_contact", rep.pass, "floor", rep.min_abs_pfaffian,
        "degenerates over the flat factor", rep.witness_point);
  }

  // wrong complement basis: the splitting check reports the violation
  {
    const lie::MatrixLieGroup su2 = lie::su2_group();
    const EmbeddedManifold s5 = geom::sphere(6);
    const OneFormField alpha = forms::standard_form_cn(3);
    const auto action = lie::su2_action_first_two(&su2, &s5);
    const lie::CoadjointElement mu = Vec::Unit(3, 2);
    auto slice = xsection::build_slice(su2, mu);
    const auto samples = xsection::find_cross_section(s5, alpha, action, slice, 5, config.seed + 13);
    // damage the complement: include the isotropy direction
    xsection::SliceData broken = slice;
    broken.complement.col(0) = Vec::Unit(3, 2);
    const auto rep = xsection::verify_splitting(s5, alpha, action, broken, samples[0].x);
    const bool pass = rep.orbit_in_xi_residual <= 1e-8 && rep.dimensions_match;
    add(doc, "wrong_complement_splitting", pass, "residual", rep.orbit_in_xi_residual,
        "complement basis not orthogonal to the isotropy algebra", samples[0].x);
  }
  return doc;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"std_contact",   "hopf_fatness",        "assoc_contact",
          "parallel_transport", "yamazaki_n1",    "yamazaki_n2",
          "kcontact_killing",   "cross_section_su2_s3", "cross_section_su2_s5",
          "negative_controls"};
}

ReportDocument run(const ScenarioConfig& config) {
  const int threads = resolve_threads(config.threads);
  const auto start = std::chrono::steady_clock::now();
  ReportDocument doc;
  if (config.scenario == "std_contact") doc = run_std_contact(config, threads);
  else if (config.scenario == "hopf_fatness") doc = run_hopf_fatness(config, threads);
  else if (config.scenario == "assoc_contact") doc = run_assoc_contact(config, threads);
  else if (config.scenario == "parallel_transport") doc = run_parallel_transport(config, threads);
  else if (config.scenario == "yamazaki_n1") doc = run_yamazaki_n1(config, threads);
  else if (config.scenario == "yamazaki_n2") doc = run_yamazaki_n2(config, threads);
  else if (config.scenario == "kcontact_killing") doc = run_kcontact_killing(config, threads);
  else if (config.scenario == "cross_section_su2_s3") doc = run_cross_section(config, threads, false);
  else if (config.scenario == "cross_section_su2_s5") doc = run_cross_section(config, threads, true);
  else if (config.scenario == "negative_controls") doc = run_negative_controls(config, threads);
  else throw ConfigError("unknown scenario '" + config.scenario + "'");
  const auto end = std::chrono::steady_clock::now();
  doc.scenario = config.scenario;
  doc.config_echo = config_to_json(config);
  doc.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return doc;
}

}  // namespace cfb::runner
