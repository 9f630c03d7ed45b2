#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "liesym/atom.hpp"
#include "liesym/errors.hpp"
#include "liesym/rational.hpp"

namespace liesym {

struct Factor {
  Atom atom;
  std::uint32_t exp;

  friend bool operator==(const Factor& a, const Factor& b) { return a.atom == b.atom && a.exp == b.exp; }
};

/// Power product of atoms, kept sorted by descending atom order.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Factor, 6>;

  Monomial() = default;
  explicit Monomial(Atom a, std::uint32_t exp = 1) {
    if (exp > 0) f_.push_back({a, exp});
  }

  const Storage& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  std::size_t size() const { return f_.size(); }

  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& f : f_) d += f.exp;
    return d;
  }

  std::uint32_t exponent(Atom a) const {
    for (const auto& f : f_) {
      if (f.atom == a) return f.exp;
    }
    return 0;
  }

  Monomial times(const Monomial& o) const {
    Monomial r;
    r.f_.reserve(f_.size() + o.f_.size());
    auto i = f_.begin();
    auto j = o.f_.begin();
    while (i != f_.end() && j != o.f_.end()) {
      if (i->atom == j->atom) {
        r.f_.push_back({i->atom, i->exp + j->exp});
        ++i;
        ++j;
      } else if (i->atom > j->atom) {
        r.f_.push_back(*i++);
      } else {
        r.f_.push_back(*j++);
      }
    }
    r.f_.insert(r.f_.end(), i, f_.end());
    r.f_.insert(r.f_.end(), j, o.f_.end());
    return r;
  }

  Monomial times(Atom a, std::uint32_t exp = 1) const { return times(Monomial(a, exp)); }

  bool divides(const Monomial& o) const {
    auto j = o.f_.begin();
    for (const auto& f : f_) {
      while (j != o.f_.end() && j->atom > f.atom) ++j;
      if (j == o.f_.end() || j->atom != f.atom || j->exp < f.exp) return false;
    }
    return true;
  }

  /// this / o; requires o.divides(*this).
  Monomial quotient(const Monomial& o) const {
    Monomial r;
    auto j = o.f_.begin();
    for (const auto& f : f_) {
      if (j != o.f_.end() && j->atom == f.atom) {
        if (f.exp > j->exp) r.f_.push_back({f.atom, f.exp - j->exp});
        ++j;
      } else {
        r.f_.push_back(f);
      }
    }
    return r;
  }

  /// Removes atom a entirely, returning its exponent through `exp`.
  Monomial without(Atom a, std::uint32_t* exp = nullptr) const {
    Monomial r;
    if (exp) *exp = 0;
    for (const auto& f : f_) {
      if (f.atom == a) {
        if (exp) *exp = f.exp;
      } else {
        r.f_.push_back(f);
      }
    }
    return r;
  }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& f : f_) {
      h ^= f.atom.key() + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h ^= f.exp + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  /// Lexicographic comparison over the atom order: -1, 0 or 1.
  static int compare(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.f_.size(), b.f_.size());
    for (std::size_t k = 0; k < n; ++k) {
      const Factor& x = a.f_[k];
      const Factor& y = b.f_[k];
      if (x.atom != y.atom) return x.atom > y.atom ? 1 : -1;
      if (x.exp != y.exp) return x.exp > y.exp ? 1 : -1;
    }
    if (a.f_.size() == b.f_.size()) return 0;
    return a.f_.size() > b.f_.size() ? 1 : -1;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  std::string str() const {
    if (f_.empty()) return "1";
    std::string s;
    for (auto it = f_.rbegin(); it != f_.rend(); ++it) {
      if (!s.empty()) s += "*";
      s += it->atom.str();
      if (it->exp > 1) s += "^" + std::to_string(it->exp);
    }
    return s;
  }

 private:
  friend class Polynomial;
  Storage f_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Strict "greater in lex order", so sorted containers hold the leading term first.
struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::compare(a, b) > 0; }
};

struct Term {
  Monomial mono;
  Rational coef;
};

class Polynomial;

using Env = std::unordered_map<Atom, Rational>;

/// Exact sparse multivariate polynomial with rational coefficients.
///
/// Terms are stored leading term first (descending lex order); no zero
/// coefficients and no repeated monomials are ever stored.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Monomial(), c});
  }
  Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(Atom a) { terms_.push_back({Monomial(a), Rational(1)}); }  // NOLINT
  Polynomial(const Monomial& m, const Rational& c) {
    if (!c.is_zero()) terms_.push_back({m, c});
  }

  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  static Polynomial from_terms(std::vector<Term> terms);

  static Polynomial x(int i) { return Polynomial(Atom::coord(i)); }
  static Polynomial u() { return Polynomial(Atom::dep()); }
  static Polynomial jet(const MultiIndex& j) { return Polynomial(Atom::jet(j)); }
  static Polynomial theta() { return Polynomial(Atom::theta()); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
    return Rational(0);
  }
  const Term& leading() const { return terms_.front(); }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }
  std::uint32_t degree_in(Atom a) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(a));
    return d;
  }
  bool contains(Atom a) const { return degree_in(a) > 0; }

  std::set<Atom> atoms() const {
    std::set<Atom> out;
    for (const auto& t : terms_) {
      for (const auto& f : t.mono.factors()) out.insert(f.atom);
    }
    return out;
  }

  template <class Pred>
  bool any_atom(Pred&& pred) const {
    for (const auto& t : terms_) {
      for (const auto& f : t.mono.factors()) {
        if (pred(f.atom)) return true;
      }
    }
    return false;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, Rational(1)); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, Rational(-1)); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Rational& c) {
    if (c.is_zero()) return {};
    Polynomial r = a;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& a) { return a * c; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
      if (a.terms_[k].mono != b.terms_[k].mono || a.terms_[k].coef != b.terms_[k].coef) return false;
    }
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Multiplies every monomial by m and every coefficient by c.
  Polynomial shifted(const Monomial& m, const Rational& c) const {
    if (c.is_zero()) return {};
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono.times(m), t.coef * c});
    return r;
  }

  /// Keeps the terms whose monomial satisfies pred.
  template <class Pred>
  Polynomial filter(Pred&& pred) const {
    Polynomial r;
    for (const auto& t : terms_) {
      if (pred(t.mono)) r.terms_.push_back(t);
    }
    return r;
  }

  /// Coefficients c_k of a^k, so that p = sum_k c_k a^k.
  std::vector<Polynomial> coefficients_in(Atom a) const;

  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, const Rational& sb) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() && j != b.terms_.end()) {
      int c = Monomial::compare(i->mono, j->mono);
      if (c > 0) {
        r.terms_.push_back(*i++);
      } else if (c < 0) {
        r.terms_.push_back({j->mono, j->coef * sb});
        ++j;
      } else {
        Rational s = i->coef + j->coef * sb;
        if (!s.is_zero()) r.terms_.push_back({i->mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i != a.terms_.end(); ++i) r.terms_.push_back(*i);
    for (; j != b.terms_.end(); ++j) r.terms_.push_back({j->mono, j->coef * sb});
    return r;
  }

  friend class PolyBuilder;
  std::vector<Term> terms_;
};

/// Hash-map accumulator for sums of many terms; call build() once at the end.
class PolyBuilder {
 public:
  PolyBuilder() = default;
  explicit PolyBuilder(std::size_t reserve) { acc_.reserve(reserve); }

  void add(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }
  void add(Monomial&& m, Rational&& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = acc_.try_emplace(std::move(m), c);
    if (!inserted) it->second += c;
  }
  void add(const Polynomial& p, const Rational& scale = Rational(1)) {
    if (scale.is_zero()) return;
    for (const auto& t : p.terms()) add(t.mono, scale.is_one() ? t.coef : t.coef * scale);
  }
  /// Adds scale * m * p.
  void add_shifted(const Polynomial& p, const Monomial& m, const Rational& scale) {
    if (scale.is_zero()) return;
    for (const auto& t : p.terms()) add(t.mono.times(m), t.coef * scale);
  }
  /// Adds scale * a * b.
  void add_product(const Polynomial& a, const Polynomial& b, const Rational& scale = Rational(1)) {
    if (scale.is_zero()) return;
    for (const auto& x : a.terms()) {
      Rational cx = scale.is_one() ? x.coef : x.coef * scale;
      for (const auto& y : b.terms()) add(x.mono.times(y.mono), cx * y.coef);
    }
  }

  std::size_t size() const { return acc_.size(); }

  Polynomial build() {
    Polynomial r;
    r.terms_.reserve(acc_.size());
    for (auto& [m, c] : acc_) {
      if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
    }
    acc_.clear();
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& a, const Term& b) { return Monomial::compare(a.mono, b.mono) > 0; });
    return r;
  }

 private:
  std::unordered_map<Monomial, Rational, MonomialHash> acc_;
};

inline Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  PolyBuilder b(terms.size());
  for (auto& t : terms) b.add(std::move(t.mono), std::move(t.coef));
  return b.build();
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b * a.terms_[0].coef;
  if (b.is_constant()) return a * b.terms_[0].coef;
  if (a.size() == 1) return b.shifted(a.terms_[0].mono, a.terms_[0].coef);
  if (b.size() == 1) return a.shifted(b.terms_[0].mono, b.terms_[0].coef);
  PolyBuilder builder(a.size() * b.size());
  builder.add_product(a, b);
  return builder.build();
}

inline std::vector<Polynomial> Polynomial::coefficients_in(Atom a) const {
  std::vector<Polynomial> out(degree_in(a) + 1);
  for (const auto& t : terms_) {
    std::uint32_t e = 0;
    Monomial rest = t.mono.without(a, &e);
    // Removing one atom keeps the relative lex order of the remaining terms
    // only within a fixed exponent, so append and re-sort at the end.
    out[e].terms_.push_back({std::move(rest), t.coef});
  }
  for (auto& p : out) {
    std::sort(p.terms_.begin(), p.terms_.end(),
              [](const Term& x, const Term& y) { return Monomial::compare(x.mono, y.mono) > 0; });
  }
  return out;
}

inline std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    bool neg = c.sign() < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      s += c.str();
    } else if (c.is_one()) {
      s += t.mono.str();
    } else {
      s += c.str() + "*" + t.mono.str();
    }
  }
  return s;
}

inline Polynomial pow(const Polynomial& p, unsigned exponent) {
  Polynomial result(1);
  Polynomial base = p;
  while (exponent != 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent != 0) base = base * base;
  }
  return result;
}

/// Formal partial derivative, treating every atom as an independent coordinate.
inline Polynomial partial_derivative(const Polynomial& p, Atom a) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    std::uint32_t e = t.mono.exponent(a);
    if (e == 0) continue;
    Monomial m = e == 1 ? t.mono.without(a) : t.mono.quotient(Monomial(a));
    out.push_back({std::move(m), t.coef * Rational(static_cast<long>(e))});
  }
  return Polynomial::from_terms(std::move(out));
}

/// Generic evaluation: sum over terms of coef(c) * prod value(atom)^exp in ring T.
template <class T, class AtomValue, class CoefValue>
T evaluate_with(const Polynomial& p, AtomValue&& value, CoefValue&& coef, T zero) {
  std::unordered_map<Atom, std::vector<T>> powers;
  auto power = [&](Atom a, std::uint32_t e) -> const T& {
    auto it = powers.find(a);
    if (it == powers.end()) it = powers.emplace(a, std::vector<T>{value(a)}).first;
    auto& v = it->second;
    while (v.size() < e) v.push_back(v.back() * v.front());
    return v[e - 1];
  };
  T sum = zero;
  for (const auto& t : p.terms()) {
    T term = coef(t.coef);
    for (const auto& f : t.mono.factors()) term = term * power(f.atom, f.exp);
    sum = sum + term;
  }
  return sum;
}

/// Exact value of p under env; throws MissingAtom for unassigned atoms.
inline Rational evaluate(const Polynomial& p, const Env& env) {
  return evaluate_with<Rational>(
      p,
      [&](Atom a) -> Rational {
        auto it = env.find(a);
        if (it == env.end()) throw MissingAtom("no value assigned to atom " + a.str());
        return it->second;
      },
      [](const Rational& c) { return c; }, Rational(0));
}

/// Replaces every occurrence of atom a by r.
inline Polynomial substitute(const Polynomial& p, Atom a, const Polynomial& r) {
  if (!p.contains(a)) return p;
  std::vector<Polynomial> rpow{Polynomial(1)};
  PolyBuilder b(p.size());
  for (const auto& t : p.terms()) {
    std::uint32_t e = 0;
    Monomial rest = t.mono.without(a, &e);
    if (e == 0) {
      b.add(t.mono, t.coef);
      continue;
    }
    while (rpow.size() <= e) rpow.push_back(rpow.back() * r);
    b.add_shifted(rpow[e], rest, t.coef);
  }
  return b.build();
}

/// Simultaneous substitution of several atoms.
inline Polynomial substitute(const Polynomial& p, const std::unordered_map<Atom, Polynomial>& subs) {
  return evaluate_with<Polynomial>(
      p,
      [&](Atom a) -> Polynomial {
        auto it = subs.find(a);
        return it == subs.end() ? Polynomial(a) : it->second;
      },
      [](const Rational& c) { return Polynomial(c); }, Polynomial());
}

/// Returns mu with p == mu * q when such a polynomial exists.
inline std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) throw DivisorZero();
  if (p.is_zero()) return Polynomial();
  if (q.is_constant()) return p * q.constant_term().inverse();
  if (p.total_degree() < q.total_degree()) return std::nullopt;
  for (Atom a : q.atoms()) {
    if (p.degree_in(a) < q.degree_in(a)) return std::nullopt;
  }
  const Term& lead = q.leading();
  Rational lead_inv = lead.coef.inverse();
  std::map<Monomial, Rational, LexGreater> rem;
  for (const auto& t : p.terms()) rem.emplace_hint(rem.end(), t.mono, t.coef);
  std::vector<Term> quotient;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lead.mono.divides(top->first)) return std::nullopt;
    Monomial m = top->first.quotient(lead.mono);
    Rational c = top->second * lead_inv;
    for (const auto& t : q.terms()) {
      Monomial tm = t.mono.times(m);
      Rational delta = -(t.coef * c);
      auto [it, inserted] = rem.try_emplace(std::move(tm), delta);
      if (!inserted) {
        it->second += delta;
        if (it->second.is_zero()) rem.erase(it);
      }
    }
    quotient.push_back({std::move(m), std::move(c)});
  }
  return Polynomial::from_terms(std::move(quotient));
}

/// Groups the terms of p by their sub-monomial over atoms satisfying `select`.
/// Each group maps to the polynomial in the remaining atoms.
template <class Select>
std::vector<std::pair<Monomial, Polynomial>> collect(const Polynomial& p, Select&& select) {
  std::unordered_map<Monomial, std::vector<Term>, MonomialHash> groups;
  for (const auto& t : p.terms()) {
    std::vector<Factor> key;
    std::vector<Factor> rest;
    for (const auto& f : t.mono.factors()) (select(f.atom) ? key : rest).push_back(f);
    Monomial km;
    for (const auto& f : key) km = km.times(f.atom, f.exp);
    Monomial rm;
    for (const auto& f : rest) rm = rm.times(f.atom, f.exp);
    groups[km].push_back({std::move(rm), t.coef});
  }
  std::vector<std::pair<Monomial, Polynomial>> out;
  out.reserve(groups.size());
  for (auto& [k, ts] : groups) out.emplace_back(k, Polynomial::from_terms(std::move(ts)));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return Monomial::compare(a.first, b.first) > 0; });
  return out;
}

}  // namespace liesym

template <>
struct std::hash<liesym::Monomial> {
  std::size_t operator()(const liesym::Monomial& m) const { return m.hash(); }
};
