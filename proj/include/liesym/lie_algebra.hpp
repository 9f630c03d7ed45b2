#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/generators.hpp"
#include "liesym/jet.hpp"

namespace liesym {

/// v(f) = xi^i df/dx^i + phi df/du on (x,u)-space.
inline Polynomial apply_field(const VectorField& v, const Polynomial& f) {
  PolyBuilder b;
  for (int i = 1; i <= v.dim(); ++i) {
    if (!v.xi(i).is_zero()) b.add_product(v.xi(i), partial_derivative(f, Atom::coord(i)));
  }
  if (!v.phi().is_zero()) b.add_product(v.phi(), partial_derivative(f, Atom::dep()));
  return b.build();
}

/// Commutator [v, w], coefficient-wise v(w_c) - w(v_c).
inline VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  if (v.dim() != w.dim()) throw Error("lie bracket of fields of different dimension");
  const int n = v.dim();
  std::vector<Polynomial> xi(n);
  for (int i = 1; i <= n; ++i) xi[i - 1] = apply_field(v, w.xi(i)) - apply_field(w, v.xi(i));
  return VectorField(n, std::move(xi), apply_field(v, w.phi()) - apply_field(w, v.phi()));
}

class NotClosed : public Error {
 public:
  NotClosed(std::size_t a, std::size_t b, const std::string& msg) : Error(msg), a_(a), b_(b) {}
  std::size_t first() const { return a_; }
  std::size_t second() const { return b_; }

 private:
  std::size_t a_;
  std::size_t b_;
};

/// Structure constants: [e_a, e_b] = sum_c c[a][b][c] e_c.
struct StructureConstants {
  std::size_t dim = 0;
  std::vector<std::vector<RationalVector>> c;

  const Rational& at(std::size_t a, std::size_t b, std::size_t k) const { return c[a][b][k]; }
};

/// Checks that every pairwise bracket lies in the span of the basis; throws
/// NotClosed naming the first offending pair.
inline StructureConstants closure_check(const GeneratorBasis& basis) {
  const std::size_t m = basis.size();
  StructureConstants sc;
  sc.dim = m;
  sc.c.assign(m, std::vector<RationalVector>(m, RationalVector(m, Rational(0))));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      VectorField br = lie_bracket(basis.fields[a], basis.fields[b]);
      auto coef = span_coefficients(basis.fields, br);
      if (!coef) {
        throw NotClosed(a, b,
                        "bracket of generators " + std::to_string(a) + " and " + std::to_string(b) + " (" +
                            br.str() + ") is outside the span");
      }
      for (std::size_t k = 0; k < m; ++k) {
        sc.c[a][b][k] = (*coef)[k];
        sc.c[b][a][k] = -(*coef)[k];
      }
    }
  }
  return sc;
}

}  // namespace liesym
