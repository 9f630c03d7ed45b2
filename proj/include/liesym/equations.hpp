#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/atom.hpp"
#include "liesym/errors.hpp"
#include "liesym/matrix.hpp"
#include "liesym/polynomial.hpp"
#include "liesym/rational.hpp"

namespace liesym {

enum class EquationKind { MongeAmpere, AffineMaximal, Custom };

/// A scalar PDE F(x, u, ..., D^k u) = 0 written as a polynomial in jet atoms.
struct PdeSystem {
  EquationKind kind = EquationKind::Custom;
  int n = 1;
  int order = 2;
  Polynomial f;
  Atom top_var;
  bool convexity_required = true;
  std::optional<Rational> theta;  // empty: theta symbolic (or absent)

  bool theta_symbolic() const { return f.contains(Atom::theta()); }

  std::string name() const {
    switch (kind) {
      case EquationKind::MongeAmpere:
        return "monge-ampere";
      case EquationKind::AffineMaximal:
        return "affine-maximal";
      case EquationKind::Custom:
        break;
    }
    return "custom";
  }
};

inline void check_dimension(int n) {
  if (n < 1 || n > kMaxDim) throw Error("dimension N must be between 1 and " + std::to_string(kMaxDim));
}

/// det D^2u - 1, solved for u_NN.
inline PdeSystem build_monge_ampere(int n) {
  check_dimension(n);
  PdeSystem s;
  s.kind = EquationKind::MongeAmpere;
  s.n = n;
  s.order = 2;
  s.f = sym_det(jet_hessian(n)) - Polynomial(1);
  s.top_var = Atom::jet({n, n});
  return s;
}

namespace detail {

inline Polynomial third(int a, int b, int c) { return Polynomial::jet({a, b, c}); }

/// U^{ij} U^{ab} U^{cd} u_{abi} u_{cdj}
inline Polynomial contraction_v(const PolyMatrix& adj, int n) {
  std::vector<Polynomial> t(n);
  for (int i = 0; i < n; ++i) {
    PolyBuilder b;
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) b.add_product(adj(a, c), third(a + 1, c + 1, i + 1));
    }
    t[i] = b.build();
  }
  PolyBuilder out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.add_product(adj(i, j), t[i] * t[j]);
  }
  return out.build();
}

/// U^{ai} U^{bj} U^{ck} u_{abc} u_{ijk}
inline Polynomial contraction_z(const PolyMatrix& adj, int n) {
  auto at = [n](int i, int j, int k) { return (i * n + j) * n + k; };
  std::vector<Polynomial> w(n * n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) w[at(a, b, c)] = third(a + 1, b + 1, c + 1);
    }
  }
  // Raise one slot at a time: w_{..i..} = sum_a U^{ai} w_{..a..}.
  for (int slot = 0; slot < 3; ++slot) {
    std::vector<Polynomial> next(n * n * n);
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          PolyBuilder b;
          for (int a = 0; a < n; ++a) {
            int idx = slot == 0 ? at(a, p, q) : slot == 1 ? at(p, a, q) : at(p, q, a);
            b.add_product(adj(a, i), w[idx]);
          }
          int out = slot == 0 ? at(i, p, q) : slot == 1 ? at(p, i, q) : at(p, q, i);
          next[out] = b.build();
        }
      }
    }
    w = std::move(next);
  }
  PolyBuilder out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) out.add_product(w[at(i, j, k)], third(i + 1, j + 1, k + 1));
    }
  }
  return out.build();
}

/// U^{ij} U^{kl} u_{ijkl}
inline Polynomial contraction_s(const PolyMatrix& adj, int n) {
  PolyBuilder out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) out.add_product(adj(i, j) * adj(k, l), Polynomial::jet({i + 1, j + 1, k + 1, l + 1}));
      }
    }
  }
  return out.build();
}

}  // namespace detail

/// The det^3-cleared contractions: "v" gives U^{ij}U^{ab}U^{cd}u_{abi}u_{cdj},
/// "z" gives U^{ai}U^{bj}U^{ck}u_{abc}u_{ijk}.
inline Polynomial named_contraction(const std::string& name, int n) {
  check_dimension(n);
  PolyMatrix adj = sym_adjugate(jet_hessian(n));
  if (name == "v") return detail::contraction_v(adj, n);
  if (name == "z") return detail::contraction_z(adj, n);
  throw Error("unknown contraction '" + name + "' (expected v or z)");
}

/// theta * v - det(D^2u) * U^{ij}U^{kl}u_{ijkl} + z, solved for u_1111.
/// With no theta given the Theta atom stays symbolic.
inline PdeSystem build_affine_maximal(int n, std::optional<Rational> theta = std::nullopt) {
  check_dimension(n);
  if (theta && theta->sign() <= 0) throw Error("theta must be positive");
  PolyMatrix h = jet_hessian(n);
  PolyMatrix adj = sym_adjugate(h);
  Polynomial det = sym_det(h);
  Polynomial th = theta ? Polynomial(*theta) : Polynomial::theta();
  PdeSystem s;
  s.kind = EquationKind::AffineMaximal;
  s.n = n;
  s.order = 4;
  s.f = th * detail::contraction_v(adj, n) - det * detail::contraction_s(adj, n) + detail::contraction_z(adj, n);
  s.top_var = Atom::jet({1, 1, 1, 1});
  s.theta = theta;
  return s;
}

/// User-supplied equation; top_var is the highest-order jet atom in which F
/// is affine-linear (the lex-largest such atom).
inline PdeSystem build_custom(int n, const Polynomial& f, bool convexity_required = true) {
  check_dimension(n);
  PdeSystem s;
  s.kind = EquationKind::Custom;
  s.n = n;
  s.f = f;
  s.convexity_required = convexity_required;
  int order = 0;
  for (Atom a : f.atoms()) {
    if (a.is(Atom::Kind::FuncPartial)) throw Error("equation must not contain unknown-function atoms");
    if (a.is(Atom::Kind::Jet)) {
      if (a.max_index() > n) throw Error("jet index exceeds N in custom equation");
      order = std::max(order, a.order());
    }
  }
  if (order == 0) throw Error("custom equation contains no jet atoms");
  s.order = order;
  bool found = false;
  for (Atom a : f.atoms()) {
    if (!a.is(Atom::Kind::Jet) || a.order() != order || f.degree_in(a) != 1) continue;
    if (!found || s.top_var < a) s.top_var = a;
    found = true;
  }
  if (!found) throw Error("custom equation is not affine-linear in any highest-order jet atom");
  return s;
}

}  // namespace liesym
