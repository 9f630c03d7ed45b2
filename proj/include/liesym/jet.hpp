#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liesym/atom.hpp"
#include "liesym/errors.hpp"
#include "liesym/polynomial.hpp"

namespace liesym {

/// Point-symmetry candidate xi^i(x,u) d/dx^i + phi(x,u) d/du with explicit
/// polynomial coefficients.
class VectorField {
 public:
  VectorField() = default;
  VectorField(int n, std::vector<Polynomial> xi, Polynomial phi) : n_(n), xi_(std::move(xi)), phi_(std::move(phi)) {
    if (n_ < 1 || n_ > kMaxDim) throw Error("vector field dimension out of range");
    if (static_cast<int>(xi_.size()) != n_) throw Error("vector field needs exactly N xi coefficients");
    validate(phi_, "phi");
    for (int s = 0; s < n_; ++s) validate(xi_[s], "xi" + std::to_string(s + 1));
  }

  static VectorField zero(int n) { return VectorField(n, std::vector<Polynomial>(n), Polynomial()); }
  /// d/dx^i
  static VectorField translation(int n, int i) {
    VectorField v = zero(n);
    v.xi_[i - 1] = Polynomial(1);
    return v;
  }

  int dim() const { return n_; }
  const std::vector<Polynomial>& xi() const { return xi_; }
  const Polynomial& xi(int s) const { return xi_[s - 1]; }
  const Polynomial& phi() const { return phi_; }
  /// Coefficient by function id: 0 is phi, s is xi^s.
  const Polynomial& coefficient(FuncId f) const { return f == kPhi ? phi_ : xi_[f - 1]; }

  bool is_zero() const {
    if (!phi_.is_zero()) return false;
    for (const auto& x : xi_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = phi_.total_degree();
    for (const auto& x : xi_) d = std::max(d, x.total_degree());
    return d;
  }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    check_same(a, b);
    VectorField r = a;
    for (int s = 0; s < a.n_; ++s) r.xi_[s] = a.xi_[s] + b.xi_[s];
    r.phi_ = a.phi_ + b.phi_;
    return r;
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b) { return a + (-1) * b; }
  friend VectorField operator*(const Rational& c, const VectorField& a) {
    VectorField r = a;
    for (auto& x : r.xi_) x = x * c;
    r.phi_ = r.phi_ * c;
    return r;
  }
  friend VectorField operator*(int c, const VectorField& a) { return Rational(c) * a; }
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.n_ == b.n_ && a.xi_ == b.xi_ && a.phi_ == b.phi_;
  }

  /// Human-readable "xi1 = ...; ...; phi = ..." form (also accepted by the parser).
  std::string str() const {
    std::string s;
    for (int i = 0; i < n_; ++i) s += "xi" + std::to_string(i + 1) + " = " + xi_[i].str() + "; ";
    return s + "phi = " + phi_.str();
  }

 private:
  static void validate(const Polynomial& p, const std::string& name) {
    if (p.any_atom([](Atom a) { return !(a.is(Atom::Kind::Coord) || a.is(Atom::Kind::Dep)); })) {
      throw JetInCoefficient("coefficient " + name + " may depend on x and u only");
    }
  }
  static void check_same(const VectorField& a, const VectorField& b) {
    if (a.n_ != b.n_) throw Error("vector fields of different dimension");
  }

  int n_ = 0;
  std::vector<Polynomial> xi_;
  Polynomial phi_;
};

/// The general point generator whose coefficients are the undetermined
/// functions xi^s(x,u), phi(x,u), represented by FuncPartial atoms.
struct SymbolicVectorField {
  int n = 1;

  Polynomial coefficient(FuncId f) const { return Polynomial(Atom::func_partial(f, {}, 0)); }
};

/// Coefficients of a generator in function-id order (phi, xi^1..xi^N), the
/// common input of every prolongation routine.
struct GeneratorCoefficients {
  int n = 0;
  std::vector<Polynomial> coeff;

  const Polynomial& phi() const { return coeff[kPhi]; }
  const Polynomial& xi(int s) const { return coeff[s]; }

  static GeneratorCoefficients of(const VectorField& v) {
    GeneratorCoefficients g{v.dim(), {}};
    g.coeff.push_back(v.phi());
    for (const auto& x : v.xi()) g.coeff.push_back(x);
    return g;
  }
  static GeneratorCoefficients of(const SymbolicVectorField& v) {
    GeneratorCoefficients g{v.n, {}};
    for (int f = 0; f <= v.n; ++f) g.coeff.push_back(v.coefficient(f));
    return g;
  }
};

/// Options for total derivatives. A non-negative max_partial_order drops
/// every generated FuncPartial atom of larger total order; this is exact for
/// downstream substitution of polynomial ansatzes of that degree.
struct DerivativeOptions {
  int max_partial_order = -1;
};

namespace detail {

inline bool keep(Atom a, const DerivativeOptions& opt) {
  return opt.max_partial_order < 0 || !a.is(Atom::Kind::FuncPartial) || a.order() <= opt.max_partial_order;
}

/// Applies the derivation whose value on each atom is given by `image`.
template <class Image>
Polynomial apply_derivation(const Polynomial& p, Image&& image) {
  PolyBuilder b(p.size() * 2);
  std::unordered_map<Atom, Polynomial> cache;
  for (const auto& t : p.terms()) {
    const auto& fs = t.mono.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      Atom a = fs[k].atom;
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, image(a)).first;
      const Polynomial& da = it->second;
      if (da.is_zero()) continue;
      Monomial rest = fs[k].exp == 1 ? t.mono.without(a) : t.mono.quotient(Monomial(a));
      b.add_shifted(da, rest, t.coef * Rational(static_cast<long>(fs[k].exp)));
    }
  }
  return b.build();
}

}  // namespace detail

/// Total derivative D_i on jet space.
inline Polynomial total_derivative(const Polynomial& p, int i, const DerivativeOptions& opt = {}) {
  return detail::apply_derivation(p, [&](Atom a) -> Polynomial {
    switch (a.kind()) {
      case Atom::Kind::Coord:
        return a.coord_index() == i ? Polynomial(1) : Polynomial();
      case Atom::Kind::Dep:
        return Polynomial::jet({i});
      case Atom::Kind::Jet:
        return Polynomial(a.with_index(i));
      case Atom::Kind::FuncPartial: {
        Polynomial r;
        Atom ax = a.with_index(i);
        if (detail::keep(ax, opt)) r = Polynomial(ax);
        Atom au = a.with_extra_u();
        if (detail::keep(au, opt)) r = r + Polynomial(au) * Polynomial::jet({i});
        return r;
      }
      case Atom::Kind::Theta:
        break;
    }
    return Polynomial();
  });
}

/// Partial derivative d/dx^i on (x,u)-space, where FuncPartial atoms are
/// functions of (x,u) and jet atoms are constants.
inline Polynomial coordinate_partial(const Polynomial& p, int i, const DerivativeOptions& opt = {}) {
  return detail::apply_derivation(p, [&](Atom a) -> Polynomial {
    if (a.is(Atom::Kind::Coord)) return a.coord_index() == i ? Polynomial(1) : Polynomial();
    if (a.is(Atom::Kind::FuncPartial)) {
      Atom ax = a.with_index(i);
      return detail::keep(ax, opt) ? Polynomial(ax) : Polynomial();
    }
    return Polynomial();
  });
}

/// Partial derivative d/du on (x,u)-space.
inline Polynomial dep_partial(const Polynomial& p, const DerivativeOptions& opt = {}) {
  return detail::apply_derivation(p, [&](Atom a) -> Polynomial {
    if (a.is(Atom::Kind::Dep)) return Polynomial(1);
    if (a.is(Atom::Kind::FuncPartial)) {
      Atom au = a.with_extra_u();
      return detail::keep(au, opt) ? Polynomial(au) : Polynomial();
    }
    return Polynomial();
  });
}

/// Highest jet order among the atoms of p (0 when p has no jet atoms).
inline int jet_order(const Polynomial& p) {
  int k = 0;
  for (Atom a : p.atoms()) {
    if (a.is(Atom::Kind::Jet)) k = std::max(k, a.order());
  }
  return k;
}

}  // namespace liesym
