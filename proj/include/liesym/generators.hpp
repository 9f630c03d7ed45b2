#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/jet.hpp"
#include "liesym/linalg.hpp"

namespace liesym {

enum class Regime { MA, AMGeneric, AMSpecial };

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::MA:
      return "ma";
    case Regime::AMGeneric:
      return "am-generic";
    case Regime::AMSpecial:
      return "am-special";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "ma") return Regime::MA;
  if (s == "am-generic") return Regime::AMGeneric;
  if (s == "am-special") return Regime::AMSpecial;
  throw Error("unknown regime '" + s + "' (expected ma, am-generic or am-special)");
}

struct GeneratorBasis {
  int n = 1;
  Regime regime = Regime::MA;
  std::vector<VectorField> fields;
  std::vector<std::string> names;

  std::size_t size() const { return fields.size(); }
  void add(std::string name, VectorField v) {
    names.push_back(std::move(name));
    fields.push_back(std::move(v));
  }
};

namespace gen {

inline VectorField field(int n, int xi_index, const Polynomial& xi, const Polynomial& phi) {
  std::vector<Polynomial> c(n);
  if (xi_index > 0) c[xi_index - 1] = xi;
  return VectorField(n, std::move(c), phi);
}

/// d/dx^i
inline VectorField dx(int n, int i) { return field(n, i, Polynomial(1), Polynomial()); }
/// d/du
inline VectorField du(int n) { return field(n, 0, Polynomial(), Polynomial(1)); }
/// x^i d/du
inline VectorField xdu(int n, int i) { return field(n, 0, Polynomial(), Polynomial::x(i)); }
/// u d/du
inline VectorField udu(int n) { return field(n, 0, Polynomial(), Polynomial::u()); }
/// x^j d/dx^i
inline VectorField xdx(int n, int j, int i) { return field(n, i, Polynomial::x(j), Polynomial()); }
/// N x^i d/dx^i + 2u d/du
inline VectorField ma_dilation(int n, int i) {
  return field(n, i, Polynomial::x(i) * Rational(n), Polynomial::u() * Rational(2));
}
/// u d/dx^i
inline VectorField udx(int n, int i) { return field(n, i, Polynomial::u(), Polynomial()); }

}  // namespace gen

/// (N+1)^2 generators: translations, d/du, x^i d/du, off-diagonal x^j d/dx^i,
/// and the dilations N x^i d/dx^i + 2u d/du.
inline GeneratorBasis ma_basis(int n) {
  GeneratorBasis b{n, Regime::MA, {}, {}};
  for (int i = 1; i <= n; ++i) b.add("d/dx" + std::to_string(i), gen::dx(n, i));
  b.add("d/du", gen::du(n));
  for (int i = 1; i <= n; ++i) b.add("x" + std::to_string(i) + " d/du", gen::xdu(n, i));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j) b.add("x" + std::to_string(j) + " d/dx" + std::to_string(i), gen::xdx(n, j, i));
    }
  }
  for (int i = 1; i <= n; ++i) {
    b.add(std::to_string(n) + " x" + std::to_string(i) + " d/dx" + std::to_string(i) + " + 2 u d/du",
          gen::ma_dilation(n, i));
  }
  return b;
}

/// N^2 + 2N + 2 generators: translations, d/du, u d/du, x^i d/du and all
/// x^j d/dx^i.
inline GeneratorBasis am_generic_basis(int n) {
  GeneratorBasis b{n, Regime::AMGeneric, {}, {}};
  for (int i = 1; i <= n; ++i) b.add("d/dx" + std::to_string(i), gen::dx(n, i));
  b.add("d/du", gen::du(n));
  b.add("u d/du", gen::udu(n));
  for (int i = 1; i <= n; ++i) b.add("x" + std::to_string(i) + " d/du", gen::xdu(n, i));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) b.add("x" + std::to_string(j) + " d/dx" + std::to_string(i), gen::xdx(n, j, i));
  }
  return b;
}

/// The generic basis plus u d/dx^i.
inline GeneratorBasis am_special_basis(int n) {
  GeneratorBasis b = am_generic_basis(n);
  b.regime = Regime::AMSpecial;
  for (int i = 1; i <= n; ++i) b.add("u d/dx" + std::to_string(i), gen::udx(n, i));
  return b;
}

inline GeneratorBasis basis_for(Regime r, int n) {
  switch (r) {
    case Regime::MA:
      return ma_basis(n);
    case Regime::AMGeneric:
      return am_generic_basis(n);
    case Regime::AMSpecial:
      return am_special_basis(n);
  }
  throw Error("unknown regime");
}

/// Coordinates of vector fields over a shared monomial index, for span tests.
class FieldCoordinates {
 public:
  explicit FieldCoordinates(int n) : n_(n) {}

  /// Registers every (function, monomial) slot used by v.
  void index(const VectorField& v) {
    for (FuncId f = 0; f <= n_; ++f) {
      for (const auto& t : v.coefficient(f).terms()) {
        auto key = std::make_pair(f, t.mono);
        if (!slot_.count(key)) slot_.emplace(key, slot_.size());
      }
    }
  }

  std::size_t size() const { return slot_.size(); }

  /// Coordinate vector of v; returns false when v uses an unregistered slot.
  bool coords(const VectorField& v, RationalVector& out) const {
    out.assign(slot_.size(), Rational(0));
    for (FuncId f = 0; f <= n_; ++f) {
      for (const auto& t : v.coefficient(f).terms()) {
        auto it = slot_.find(std::make_pair(f, t.mono));
        if (it == slot_.end()) return false;
        out[it->second] = t.coef;
      }
    }
    return true;
  }

 private:
  struct Less {
    bool operator()(const std::pair<FuncId, Monomial>& a, const std::pair<FuncId, Monomial>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return Monomial::compare(a.second, b.second) < 0;
    }
  };
  int n_;
  std::map<std::pair<FuncId, Monomial>, std::size_t, Less> slot_;
};

/// Exact rank of a list of vector fields.
inline std::size_t field_rank(const std::vector<VectorField>& fields) {
  if (fields.empty()) return 0;
  FieldCoordinates fc(fields.front().dim());
  for (const auto& v : fields) fc.index(v);
  RowEchelon ech(fc.size());
  RationalVector row;
  for (const auto& v : fields) {
    fc.coords(v, row);
    ech.add(row);
  }
  return ech.rank();
}

inline bool linearly_independent(const std::vector<VectorField>& fields) { return field_rank(fields) == fields.size(); }

/// Coefficients expressing v in terms of `fields`, if v lies in their span.
inline std::optional<RationalVector> span_coefficients(const std::vector<VectorField>& fields, const VectorField& v) {
  FieldCoordinates fc(v.dim());
  for (const auto& f : fields) fc.index(f);
  RationalVector target;
  if (!fc.coords(v, target)) return std::nullopt;
  RationalMatrix a(fc.size(), fields.size());
  RationalVector col;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    fc.coords(fields[j], col);
    for (std::size_t i = 0; i < col.size(); ++i) a(i, j) = col[i];
  }
  return solve_linear(a, target);
}

/// Mutual span containment of two lists of fields.
inline bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
  for (const auto& v : b) {
    if (!span_coefficients(a, v)) return false;
  }
  for (const auto& v : a) {
    if (!span_coefficients(b, v)) return false;
  }
  return true;
}

}  // namespace liesym
