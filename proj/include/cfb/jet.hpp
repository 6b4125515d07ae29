#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cfb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace geom {

/// First-order jet: a scalar value together with its gradient with respect
/// to the coordinates the evaluation was seeded in. An empty gradient means
/// "zero gradient of whatever dimension", so plain constants mix freely with
/// seeded variables inside one evaluation.
class Jet {
 public:
  double v = 0.0;
  Vec g;

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit for constants
  Jet(double value, Vec grad) : v(value), g(std::move(grad)) {}

  /// Seed variable i of an n-dimensional evaluation.
  static Jet variable(double value, int n, int i) {
    Vec grad = Vec::Zero(n);
    grad[i] = 1.0;
    return {value, std::move(grad)};
  }

  Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
  Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
  Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    return {a.v + b.v, comb(a.g, b.g, 1.0, 1.0)};
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    return {a.v - b.v, comb(a.g, b.g, 1.0, -1.0)};
  }
  friend Jet operator-(const Jet& a) { return {-a.v, a.g.size() ? Vec(-a.g) : Vec()}; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, comb(a.g, b.g, b.v, a.v)};
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const double inv = 1.0 / b.v;
    return {a.v * inv, comb(a.g, b.g, inv, -a.v * inv * inv)};
  }

 private:
  // ca*a + cb*b with empty vectors treated as zero.
  static Vec comb(const Vec& a, const Vec& b, double ca, double cb) {
    if (a.size() == 0) return b.size() == 0 ? Vec() : Vec(cb * b);
    if (b.size() == 0) return Vec(ca * a);
    return ca * a + cb * b;
  }
};

inline Jet sin(const Jet& a) { return {std::sin(a.v), a.g.size() ? Vec(std::cos(a.v) * a.g) : Vec()}; }
inline Jet cos(const Jet& a) { return {std::cos(a.v), a.g.size() ? Vec(-std::sin(a.v) * a.g) : Vec()}; }
inline Jet exp(const Jet& a) { const double e = std::exp(a.v); return {e, a.g.size() ? Vec(e * a.g) : Vec()}; }
inline Jet log(const Jet& a) { return {std::log(a.v), a.g.size() ? Vec(a.g / a.v) : Vec()}; }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return {s, a.g.size() ? Vec(a.g / (2.0 * s)) : Vec()};
}
inline Jet pow(const Jet& a, double p) {
  return {std::pow(a.v, p), a.g.size() ? Vec(p * std::pow(a.v, p - 1.0) * a.g) : Vec()};
}
inline Jet sqr(const Jet& a) { return a * a; }

using JetVec = std::vector<Jet>;

inline Jet dot(const JetVec& a, const JetVec& b) {
  Jet s(0.0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Seed an ambient point with no derivative tracking (value-only pass).
inline JetVec seed_value(const Vec& x) {
  JetVec out(static_cast<size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) out[static_cast<size_t>(i)] = Jet(x[i]);
  return out;
}

/// Seed an ambient point so that gradients are taken with respect to it.
inline JetVec seed_identity(const Vec& x) {
  const int n = static_cast<int>(x.size());
  JetVec out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = Jet::variable(x[i], n, i);
  return out;
}

/// A jet-evaluable smooth map between Euclidean spaces. Evaluating on seeded
/// jets yields both the value and the Jacobian in one pass; the same callable
/// is reused for value-only evaluation.
class SmoothMap {
 public:
  using Fn = std::function<JetVec(const JetVec&)>;

  SmoothMap() = default;
  SmoothMap(int in_dim, int out_dim, Fn fn)
      : in_(in_dim), out_(out_dim), fn_(std::move(fn)) {}

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  bool valid() const { return static_cast<bool>(fn_); }

  JetVec operator()(const JetVec& x) const { return fn_(x); }

  Vec value(const Vec& x) const {
    const JetVec out = fn_(seed_value(x));
    Vec v(out_);
    for (int i = 0; i < out_; ++i) v[i] = out[static_cast<size_t>(i)].v;
    return v;
  }

  /// Value and Jacobian (rows = outputs) at x.
  std::pair<Vec, Mat> eval(const Vec& x) const {
    const JetVec out = fn_(seed_identity(x));
    Vec v(out_);
    Mat J = Mat::Zero(out_, in_);
    for (int i = 0; i < out_; ++i) {
      v[i] = out[static_cast<size_t>(i)].v;
      if (out[static_cast<size_t>(i)].g.size()) J.row(i) = out[static_cast<size_t>(i)].g.transpose();
    }
    return {std::move(v), std::move(J)};
  }

  Mat jacobian(const Vec& x) const { return eval(x).second; }

 private:
  int in_ = 0;
  int out_ = 0;
  Fn fn_;
};

/// Identity map on R^n.
inline SmoothMap identity_map(int n) {
  return {n, n, [](const JetVec& x) { return x; }};
}

/// Linear map x -> M x.
inline SmoothMap linear_map(const Mat& M) {
  const int rows = static_cast<int>(M.rows()), cols = static_cast<int>(M.cols());
  return {cols, rows, [M, rows, cols](const JetVec& x) {
            JetVec out(static_cast<size_t>(rows), Jet(0.0));
            for (int i = 0; i < rows; ++i)
              for (int j = 0; j < cols; ++j)
                if (M(i, j) != 0.0) out[static_cast<size_t>(i)] += Jet(M(i, j)) * x[static_cast<size_t>(j)];
            return out;
          }};
}

}  // namespace geom
}  // namespace cfb
