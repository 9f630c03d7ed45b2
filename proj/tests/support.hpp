#pragma once

#include <ostream>
#include <random>
#include <set>
#include <vector>

#include "liesym/liesym.hpp"

namespace liesym {

inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << p.str(); }
inline void PrintTo(const Rational& r, std::ostream* os) { *os << r.str(); }

}  // namespace liesym

namespace liesym::testing {

inline Rational random_rational(std::mt19937_64& rng, int num = 9, int den = 3) {
  std::uniform_int_distribution<int> n(-num, num);
  std::uniform_int_distribution<int> d(1, den);
  return Rational(n(rng)) / Rational(d(rng));
}

/// Random polynomial in the given atoms: `terms` monomials of degree <= max_degree.
inline Polynomial random_polynomial(std::mt19937_64& rng, const std::vector<Atom>& atoms, int terms, int max_degree) {
  PolyBuilder b;
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) m = m.times(atoms[pick(rng)]);
    b.add(m, random_rational(rng));
  }
  return b.build();
}

inline std::vector<Atom> xu_atoms(int n) {
  std::vector<Atom> a;
  for (int i = 1; i <= n; ++i) a.push_back(Atom::coord(i));
  a.push_back(Atom::dep());
  return a;
}

/// Random point vector field with coefficients of degree <= 3 in (x, u).
inline VectorField random_field(std::mt19937_64& rng, int n, int terms = 5, int max_degree = 3) {
  std::vector<Polynomial> xi;
  for (int i = 0; i < n; ++i) xi.push_back(random_polynomial(rng, xu_atoms(n), terms, max_degree));
  return VectorField(n, xi, random_polynomial(rng, xu_atoms(n), terms, max_degree));
}

inline Env random_env(std::mt19937_64& rng, const std::set<Atom>& atoms) {
  Env env;
  for (Atom a : atoms) env.emplace(a, random_rational(rng));
  return env;
}

}  // namespace liesym::testing
