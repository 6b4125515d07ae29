#pragma once

#include <vector>

#include "cfb/forms.hpp"
#include "cfb/util.hpp"

namespace cfb::forms {

/// Random smooth scalar fields assembled from primitives with hand-coded
/// gradients, so both f and grad f stay first-order jet-evaluable. Used by
/// the d(df) = 0, Cartan, and jet-vs-finite-difference sweeps.
struct ScalarFieldPair {
  geom::SmoothMap f;     // n -> 1
  geom::SmoothMap grad;  // n -> n
};

namespace detail {
struct FieldTerm {
  int kind;  // 0: c x_a x_b, 1: c sin(x_a), 2: c x_b cos(x_a)
  int a, b;
  double c;
};

inline std::vector<FieldTerm> random_terms(Rng& rng, int n, int terms) {
  std::vector<FieldTerm> ts;
  ts.reserve(static_cast<size_t>(terms));
  for (int t = 0; t < terms; ++t) {
    FieldTerm tm;
    tm.kind = static_cast<int>(rng.bits() % 3);
    tm.a = static_cast<int>(rng.bits() % static_cast<uint64_t>(n));
    tm.b = static_cast<int>(rng.bits() % static_cast<uint64_t>(n));
    tm.c = rng.uniform(-1.0, 1.0);
    ts.push_back(tm);
  }
  return ts;
}

inline geom::Jet term_value(const FieldTerm& t, const geom::JetVec& x) {
  using geom::Jet;
  if (t.kind == 0) return Jet(t.c) * x[static_cast<size_t>(t.a)] * x[static_cast<size_t>(t.b)];
  if (t.kind == 1) return Jet(t.c) * sin(x[static_cast<size_t>(t.a)]);
  return Jet(t.c) * x[static_cast<size_t>(t.b)] * cos(x[static_cast<size_t>(t.a)]);
}
}  // namespace detail

inline ScalarFieldPair random_scalar_field(Rng& rng, int n, int terms = 4) {
  using geom::Jet;
  using geom::JetVec;
  const auto ts = detail::random_terms(rng, n, terms);
  geom::SmoothMap f(n, 1, [ts](const JetVec& x) {
    Jet s(0.0);
    for (const auto& t : ts) s += detail::term_value(t, x);
    return JetVec{s};
  });
  geom::SmoothMap grad(n, n, [ts, n](const JetVec& x) {
    JetVec g(static_cast<size_t>(n), Jet(0.0));
    for (const auto& t : ts) {
      if (t.kind == 0) {
        g[static_cast<size_t>(t.a)] += Jet(t.c) * x[static_cast<size_t>(t.b)];
        g[static_cast<size_t>(t.b)] += Jet(t.c) * x[static_cast<size_t>(t.a)];
      } else if (t.kind == 1) {
        g[static_cast<size_t>(t.a)] += Jet(t.c) * cos(x[static_cast<size_t>(t.a)]);
      } else {
        g[static_cast<size_t>(t.b)] += Jet(t.c) * cos(x[static_cast<size_t>(t.a)]);
        g[static_cast<size_t>(t.a)] +=
            Jet(-t.c) * x[static_cast<size_t>(t.b)] * sin(x[static_cast<size_t>(t.a)]);
      }
    }
    return g;
  });
  return {std::move(f), std::move(grad)};
}

inline geom::SmoothMap random_vector_map(Rng& rng, int n, int terms = 3) {
  using geom::Jet;
  using geom::JetVec;
  std::vector<std::vector<detail::FieldTerm>> comps;
  comps.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) comps.push_back(detail::random_terms(rng, n, terms));
  return {n, n, [comps, n](const JetVec& x) {
            JetVec out(static_cast<size_t>(n), Jet(0.0));
            for (int i = 0; i < n; ++i)
              for (const auto& t : comps[static_cast<size_t>(i)])
                out[static_cast<size_t>(i)] += detail::term_value(t, x);
            return out;
          }};
}

inline VectorFieldEntity random_field(Rng& rng, int n, int terms = 3) {
  return VectorFieldEntity(random_vector_map(rng, n, terms));
}

inline OneFormField random_oneform(Rng& rng, int n, int terms = 3) {
  return OneFormField(random_vector_map(rng, n, terms));
}

}  // namespace cfb::forms
