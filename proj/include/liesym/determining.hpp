#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "liesym/equations.hpp"
#include "liesym/explicit_prolongation.hpp"
#include "liesym/generators.hpp"
#include "liesym/linalg.hpp"
#include "liesym/prolongation.hpp"

namespace liesym {

/// Linear homogeneous equations in the unknown-function partials
/// (FuncPartial atoms) with rational coefficients, kept in reduced row
/// echelon form over `unknowns`.
struct DeterminingSystem {
  int n = 1;
  int max_partial_order = -1;  // -1: complete; otherwise partials above this order were dropped
  std::vector<Atom> unknowns;
  std::vector<Polynomial> equations;
  std::size_t raw_equations = 0;  // coefficient equations before reduction

  /// Values of the equations on a concrete field.
  std::vector<Polynomial> residuals(const VectorField& v) const {
    FieldPartials fp(GeneratorCoefficients::of(v));
    std::unordered_map<Atom, Polynomial> subs;
    for (Atom a : unknowns) subs.emplace(a, fp.get(a.func(), a.multi_index(), a.ucount()));
    std::vector<Polynomial> out;
    for (const auto& e : equations) out.push_back(substitute(e, subs));
    return out;
  }

  /// True when every equation vanishes identically on v. With a truncated
  /// system this is exact only for fields of degree <= max_partial_order.
  bool satisfied_by(const VectorField& v) const {
    for (const auto& r : residuals(v)) {
      if (!r.is_zero()) return false;
    }
    return true;
  }
};

namespace detail {

/// pr v F with the top variable eliminated through F = 0: writing F = a t + b
/// and pr v F = sum_k R_k t^k, returns sum_k R_k (-b)^k a^(p-k).
inline Polynomial eliminate_top(const Polynomial& r, const PdeSystem& sys) {
  std::vector<Polynomial> rk = r.coefficients_in(sys.top_var);
  std::vector<Polynomial> fc = sys.f.coefficients_in(sys.top_var);
  if (fc.size() != 2) throw Error("equation is not affine-linear in its top variable");
  const Polynomial& a = fc[1];
  Polynomial minus_b = fc[0] * Rational(-1);
  const unsigned p = static_cast<unsigned>(rk.size() - 1);
  std::vector<Polynomial> apow{Polynomial(1)};
  std::vector<Polynomial> bpow{Polynomial(1)};
  for (unsigned k = 1; k <= p; ++k) {
    apow.push_back(apow.back() * a);
    bpow.push_back(bpow.back() * minus_b);
  }
  PolyBuilder out;
  for (unsigned k = 0; k <= p; ++k) {
    if (rk[k].is_zero()) continue;
    out.add_product(rk[k], bpow[k] * apow[p - k]);
  }
  return out.build();
}

}  // namespace detail

/// Determining equations of the point symmetries of sys. A non-negative
/// opt.max_partial_order drops partials of higher order throughout, which is
/// exact for polynomial fields up to that degree.
inline DeterminingSystem extract_determining(const PdeSystem& sys, const DerivativeOptions& opt = {}) {
  Polynomial r = apply_prolonged(SymbolicVectorField{sys.n}, sys.f, sys.order, opt);
  Polynomial cleared = detail::eliminate_top(r, sys);

  // Every term carries exactly one unknown; group by the remaining jet/theta
  // monomial.
  std::set<Atom> unknown_set;
  std::unordered_map<Monomial, std::vector<std::pair<Atom, Rational>>, MonomialHash> groups;
  for (const auto& t : cleared.terms()) {
    Monomial key;
    Atom unknown;
    int found = 0;
    for (const auto& f : t.mono.factors()) {
      if (f.atom.is(Atom::Kind::FuncPartial)) {
        if (f.exp != 1) throw Error("prolonged equation is not linear in the unknown functions");
        unknown = f.atom;
        ++found;
      } else {
        key = key.times(f.atom, f.exp);
      }
    }
    if (found != 1) throw Error("prolonged equation is not linear in the unknown functions");
    unknown_set.insert(unknown);
    groups[key].emplace_back(unknown, t.coef);
  }

  DeterminingSystem ds;
  ds.n = sys.n;
  ds.max_partial_order = opt.max_partial_order;
  ds.unknowns.assign(unknown_set.rbegin(), unknown_set.rend());
  std::map<Atom, std::size_t> column;
  for (std::size_t j = 0; j < ds.unknowns.size(); ++j) column.emplace(ds.unknowns[j], j);

  std::vector<std::pair<Monomial, std::vector<std::pair<Atom, Rational>>>> ordered(groups.begin(), groups.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return Monomial::compare(x.first, y.first) > 0; });
  ds.raw_equations = ordered.size();

  RowEchelon ech(ds.unknowns.size());
  RationalVector row;
  for (const auto& [key, entries] : ordered) {
    row.assign(ds.unknowns.size(), Rational(0));
    for (const auto& [atom, coef] : entries) row[column.at(atom)] += coef;
    ech.add(row);
  }
  for (const auto& rw : ech.rows()) {
    PolyBuilder b;
    for (std::size_t j = 0; j < rw.size(); ++j) {
      if (!rw[j].is_zero()) b.add(Monomial(ds.unknowns[j]), rw[j]);
    }
    ds.equations.push_back(b.build());
  }
  return ds;
}

/// Monomials x^alpha u^beta of total degree <= d, in increasing degree.
inline std::vector<Monomial> xu_monomials(int n, int d) {
  std::vector<Monomial> out{Monomial()};
  std::vector<Monomial> layer{Monomial()};
  std::vector<Atom> vars;
  for (int i = 1; i <= n; ++i) vars.push_back(Atom::coord(i));
  vars.push_back(Atom::dep());
  for (int deg = 1; deg <= d; ++deg) {
    std::set<Monomial, LexGreater> next;
    for (const auto& m : layer) {
      for (Atom v : vars) next.insert(m.times(v));
    }
    layer.assign(next.begin(), next.end());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

struct AnsatzResult {
  int n = 1;
  int degree = 0;
  std::size_t unknowns = 0;  // ansatz coefficients
  std::size_t dimension = 0;
  std::vector<VectorField> basis;
};

/// Polynomial fields of degree <= d solving the determining system `ds`
/// (which must be complete or truncated at order >= d).
inline AnsatzResult solve_ansatz(const DeterminingSystem& ds, int d) {
  if (d < 1) throw Error("ansatz degree must be at least 1");
  if (ds.max_partial_order >= 0 && ds.max_partial_order < d) {
    throw Error("determining system was truncated below the ansatz degree");
  }
  const int n = ds.n;
  std::vector<Monomial> monos = xu_monomials(n, d);
  std::unordered_map<Monomial, std::size_t, MonomialHash> mono_index;
  for (std::size_t k = 0; k < monos.size(); ++k) mono_index.emplace(monos[k], k);
  const std::size_t per = monos.size();
  const std::size_t cols = per * static_cast<std::size_t>(n + 1);
  auto column = [&](FuncId f, std::size_t m) { return static_cast<std::size_t>(f) * per + m; };

  // d^a/dx^a d^b/du^b of a monomial: coefficient and result (absent if zero).
  auto differentiate = [&](const Monomial& m, Atom partial, Rational& coef) -> std::optional<Monomial> {
    Monomial cur = m;
    coef = Rational(1);
    auto take = [&](Atom var, int times) {
      for (int t = 0; t < times; ++t) {
        std::uint32_t e = cur.exponent(var);
        if (e == 0) return false;
        coef *= Rational(static_cast<long>(e));
        cur = e == 1 ? cur.without(var) : cur.quotient(Monomial(var));
      }
      return true;
    };
    for (int i = 1; i <= n; ++i) {
      if (!take(Atom::coord(i), partial.index_count(i))) return std::nullopt;
    }
    if (!take(Atom::dep(), partial.ucount())) return std::nullopt;
    return cur;
  };

  RowEchelon ech(cols);
  for (const auto& eq : ds.equations) {
    std::unordered_map<Monomial, RationalVector, MonomialHash> rows;
    for (const auto& t : eq.terms()) {
      Atom partial = t.mono.factors().front().atom;
      for (std::size_t k = 0; k < per; ++k) {
        Rational c;
        auto res = differentiate(monos[k], partial, c);
        if (!res) continue;
        auto it = rows.find(*res);
        if (it == rows.end()) it = rows.emplace(*res, RationalVector(cols, Rational(0))).first;
        it->second[column(partial.func(), k)] += c * t.coef;
      }
    }
    for (auto& [m, r] : rows) ech.add(std::move(r));
  }

  AnsatzResult res;
  res.n = n;
  res.degree = d;
  res.unknowns = cols;
  std::vector<bool> is_pivot(cols, false);
  for (auto p : ech.pivots()) is_pivot[p] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector x(cols, Rational(0));
    x[f] = Rational(1);
    for (std::size_t r = 0; r < ech.rank(); ++r) x[ech.pivots()[r]] = -ech.rows()[r][f];
    std::vector<Polynomial> coeff(n + 1);
    for (FuncId fn = 0; fn <= n; ++fn) {
      PolyBuilder b;
      for (std::size_t k = 0; k < per; ++k) {
        const Rational& c = x[column(fn, k)];
        if (!c.is_zero()) b.add(monos[k], c);
      }
      coeff[fn] = b.build();
    }
    std::vector<Polynomial> xi(coeff.begin() + 1, coeff.end());
    res.basis.emplace_back(n, std::move(xi), coeff[0]);
  }
  res.dimension = res.basis.size();
  return res;
}

/// Dimension and basis of the polynomial symmetries of degree <= d.
inline AnsatzResult ansatz_dimension(const PdeSystem& sys, int d) {
  if (d < 1) throw Error("ansatz degree must be at least 1");
  DerivativeOptions opt;
  opt.max_partial_order = d;
  return solve_ansatz(extract_determining(sys, opt), d);
}

}  // namespace liesym
