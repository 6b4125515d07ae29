#include "cfb/forms.hpp"

#include <cmath>

namespace cfb::forms {

Vec VectorFieldEntity::pushforward(const Vec& p, const Vec& u, double fd_eps) const {
  if (jet_) return jet_->jacobian(p) * u;
  const double nu = u.norm();
  if (nu == 0.0) return Vec::Zero(dim_);
  const Vec dir = u / nu;
  return nu / (2.0 * fd_eps) * (value_(p + fd_eps * dir) - value_(p - fd_eps * dir));
}

double eval_d(const OneFormField& alpha, const Vec& p, const Vec& u, const Vec& v) {
  const Mat D = alpha.coefficients().jacobian(p);
  return v.dot(D * u) - u.dot(D * v);
}

Mat d_on_frame(const OneFormField& alpha, const Vec& p, const Mat& frame) {
  const Mat D = alpha.coefficients().jacobian(p);
  const Mat M = frame.transpose() * D * frame;  // M_ij = <D f_j, f_i>
  return M.transpose() - M;                     // W_ij = dalpha(f_i, f_j)
}

Vec lie_bracket(const VectorFieldEntity& X, const VectorFieldEntity& Y, const Vec& p,
                double fd_eps) {
  return Y.pushforward(p, X(p), fd_eps) - X.pushforward(p, Y(p), fd_eps);
}

double derive_alpha_of_field(const OneFormField& alpha, const VectorFieldEntity& Y,
                             const Vec& p, const Vec& u) {
  if (Y.has_jet()) {
    JetVec px = geom::seed_identity(p);
    const JetVec a = alpha.coefficients()(px);
    const JetVec y = Y.jet()(px);
    const Jet s = geom::dot(a, y);
    return s.g.size() ? s.g.dot(u) : 0.0;
  }
  const double eps = 1e-6;
  const double nu = u.norm();
  if (nu == 0.0) return 0.0;
  const Vec dir = u / nu;
  const Vec pp = p + eps * dir, pm = p - eps * dir;
  return nu * (alpha(pp, Y(pp)) - alpha(pm, Y(pm))) / (2.0 * eps);
}

namespace {

Mat bordered_matrix(const OneFormField& alpha, const Vec& p, const Mat& frame) {
  const int n = static_cast<int>(frame.cols());
  const Vec a = alpha.on_frame(p, frame);
  const Mat W = d_on_frame(alpha, p, frame);
  Mat B = Mat::Zero(n + 1, n + 1);
  B.block(0, 1, 1, n) = a.transpose();
  B.block(1, 0, n, 1) = -a;
  B.block(1, 1, n, n) = W;
  return B;
}

}  // namespace

double bordered_pfaffian(const OneFormField& alpha, const Vec& p, const Mat& frame) {
  return linalg::pfaffian(bordered_matrix(alpha, p, frame));
}

double pfaffian_scale(const OneFormField& alpha, const Vec& p, const Mat& frame) {
  const Mat B = bordered_matrix(alpha, p, frame);
  const int half = static_cast<int>(B.rows()) / 2;
  const double m = std::max(B.cwiseAbs().maxCoeff(), 1e-300);
  return std::pow(m, half);
}

double contact_pfaffian(const OneFormField& alpha, const EmbeddedManifold& M, const Vec& p) {
  if (M.dim() % 2 == 0)
    throw EvenDimension("contact test needs odd-dimensional manifold, got dim " +
                        std::to_string(M.dim()));
  return bordered_pfaffian(alpha, p, M.tangent_frame(p).columns);
}

Vec reeb_in_frame(const OneFormField& alpha, const Vec& p, const Mat& frame,
                  double residual_tol) {
  const int n = static_cast<int>(frame.cols());
  const Vec a = alpha.on_frame(p, frame);
  const Mat W = d_on_frame(alpha, p, frame);
  Mat A(n + 1, n);
  A.row(0) = a.transpose();
  A.bottomRows(n) = W;
  Vec rhs = Vec::Zero(n + 1);
  rhs[0] = 1.0;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec r = svd.solve(rhs);
  const double res = (A * r - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if (res > residual_tol * scale)
    throw DegenerateContact("Reeb system residual " + std::to_string(res) +
                            "; form is not contact at this point");
  return frame * r;
}

Vec reeb(const OneFormField& alpha, const EmbeddedManifold& M, const Vec& p,
         double residual_tol) {
  return reeb_in_frame(alpha, p, M.tangent_frame(p).columns, residual_tol);
}

VectorFieldEntity reeb_field(const OneFormField& alpha, const EmbeddedManifold& M) {
  return VectorFieldEntity(M.ambient_dim(), [alpha, &M](const Vec& x) {
    // Solve against ker(Dconstraint) at x; smooth off-manifold near M, which
    // finite-difference consumers rely on.
    Mat frame = M.codim() ? linalg::null_space(M.constraint_jacobian(x), M.rank_tol())
                          : Mat::Identity(M.ambient_dim(), M.ambient_dim());
    return reeb_in_frame(alpha, x, frame);
  });
}

FlowResult integrate_ode(const std::function<Vec(double, const Vec&)>& rhs,
                         const Vec& x0, double t0, double t1, int steps,
                         const EmbeddedManifold* retract_on, const Mat& U0,
                         double fd_eps) {
  Vec x = x0;
  Mat U = U0;
  const double h = (t1 - t0) / steps;
  const bool with_var = U.cols() > 0;

  // Directional derivative of the (possibly solved) field, for the
  // variational equation.
  auto dvf = [&](double t, const Vec& at, const Vec& u) -> Vec {
    const double nu = u.norm();
    if (nu == 0.0) return Vec::Zero(at.size());
    const Vec dir = u / nu;
    return nu / (2.0 * fd_eps) * (rhs(t, at + fd_eps * dir) - rhs(t, at - fd_eps * dir));
  };
  auto dvf_mat = [&](double t, const Vec& at, const Mat& cols) -> Mat {
    Mat out(at.size(), cols.cols());
    for (int j = 0; j < cols.cols(); ++j) out.col(j) = dvf(t, at, cols.col(j));
    return out;
  };

  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const Vec k1 = rhs(t, x);
    const Vec k2 = rhs(t + h / 2, x + h / 2 * k1);
    const Vec k3 = rhs(t + h / 2, x + h / 2 * k2);
    const Vec k4 = rhs(t + h, x + h * k3);
    if (with_var) {
      const Mat K1 = dvf_mat(t, x, U);
      const Mat K2 = dvf_mat(t + h / 2, x + h / 2 * k1, U + h / 2 * K1);
      const Mat K3 = dvf_mat(t + h / 2, x + h / 2 * k2, U + h / 2 * K2);
      const Mat K4 = dvf_mat(t + h, x + h * k3, U + h * K3);
      U += h / 6 * (K1 + 2 * K2 + 2 * K3 + K4);
    }
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!x.allFinite()) throw FlowEscape("flow diverged at step " + std::to_string(s));
    if (retract_on) {
      try {
        x = retract_on->retract(x);
      } catch (const Error&) {
        throw FlowEscape("flow left the retraction basin at step " + std::to_string(s));
      }
    }
  }
  return {std::move(x), std::move(U)};
}

FlowResult flow(const VectorFieldEntity& X, const Vec& x0, double t, int steps,
                const EmbeddedManifold* retract_on, const Mat& U0) {
  return integrate_ode([&X](double, const Vec& x) { return X(x); }, x0, 0.0, t, steps,
                       retract_on, U0);
}

Mat lie_derivative_metric(const MetricField& g, const VectorFieldEntity& X,
                          const Vec& p, const Mat& U, double h,
                          const EmbeddedManifold* retract_on) {
  const int steps = 10;  // RK4 step h/10
  const FlowResult fwd = flow(X, p, h, steps, retract_on, U);
  const FlowResult bwd = flow(X, p, -h, steps, retract_on, U);
  const Mat gp = g(fwd.x), gm = g(bwd.x);
  const Mat pull_p = fwd.U.transpose() * gp * fwd.U;
  const Mat pull_m = bwd.U.transpose() * gm * bwd.U;
  return (pull_p - pull_m) / (2.0 * h);
}

Vec lie_derivative_oneform(const OneFormField& alpha, const VectorFieldEntity& X,
                           const Vec& p, const Mat& U, double h,
                           const EmbeddedManifold* retract_on) {
  const int steps = 10;
  const FlowResult fwd = flow(X, p, h, steps, retract_on, U);
  const FlowResult bwd = flow(X, p, -h, steps, retract_on, U);
  const Vec pull_p = fwd.U.transpose() * alpha.covector(fwd.x);
  const Vec pull_m = bwd.U.transpose() * alpha.covector(bwd.x);
  return (pull_p - pull_m) / (2.0 * h);
}

OneFormField exact_form(SmoothMap gradient) { return OneFormField(std::move(gradient)); }

OneFormField conformal_rescale(const OneFormField& alpha, SmoothMap f) {
  const SmoothMap coeff = alpha.coefficients();
  const int n = coeff.in_dim();
  return OneFormField({n, n, [coeff, f](const JetVec& x) {
                         const Jet s = geom::exp(f(x)[0]);
                         JetVec a = coeff(x);
                         for (auto& ai : a) ai = ai * s;
                         return a;
                       }});
}

OneFormField standard_form_cn(int n) {
  return OneFormField({2 * n, 2 * n, [n](const JetVec& z) {
                         JetVec a(static_cast<size_t>(2 * n));
                         for (int j = 0; j < n; ++j) {
                           a[static_cast<size_t>(2 * j)] = Jet(-2.0) * z[static_cast<size_t>(2 * j + 1)];
                           a[static_cast<size_t>(2 * j + 1)] = Jet(2.0) * z[static_cast<size_t>(2 * j)];
                         }
                         return a;
                       }});
}

OneFormField standard_form_r2n1(int n) {
  const int N = 2 * n + 1;
  return OneFormField({N, N, [n, N](const JetVec& x) {
                         JetVec a(static_cast<size_t>(N), Jet(0.0));
                         for (int i = 0; i < n; ++i)
                           a[static_cast<size_t>(2 * i)] = -x[static_cast<size_t>(2 * i + 1)];
                         a[static_cast<size_t>(N - 1)] = Jet(1.0);
                         return a;
                       }});
}

}  // namespace cfb::forms
