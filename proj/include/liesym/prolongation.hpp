#pragma once

#include <map>
#include <string>
#include <vector>

#include "liesym/jet.hpp"
#include "liesym/polynomial.hpp"

namespace liesym {

/// Coefficients phi^J of pr^(k) v for every sorted multi-index of order 0..k
/// (phi^{} is phi itself).
struct ProlongedField {
  int n = 0;
  int order = 0;
  std::map<MultiIndex, Polynomial> coeffs;

  const Polynomial& at(const MultiIndex& j) const {
    auto it = coeffs.find(j);
    if (it == coeffs.end()) throw Error("no prolongation coefficient for multi-index (" + j.str() + ")");
    return it->second;
  }
};

/// Computes prolongation coefficients phi^J = D_J(phi - xi^s u_s) + xi^s u_{Js}
/// by iterated total differentiation, memoising D_J of the characteristic.
class Prolongator {
 public:
  explicit Prolongator(GeneratorCoefficients g, DerivativeOptions opt = {}) : g_(std::move(g)), opt_(opt) {
    Polynomial q = g_.phi();
    for (int s = 1; s <= g_.n; ++s) q = q - g_.xi(s) * Polynomial::jet({s});
    memo_.emplace(MultiIndex(), std::move(q));
  }

  int dim() const { return g_.n; }
  const GeneratorCoefficients& generator() const { return g_; }
  const DerivativeOptions& options() const { return opt_; }

  /// D_J Q for the characteristic Q = phi - xi^s u_s.
  const Polynomial& characteristic_derivative(const MultiIndex& j) {
    auto it = memo_.find(j);
    if (it != memo_.end()) return it->second;
    std::vector<int> idx = j.indices();
    int last = idx.back();
    idx.pop_back();
    const Polynomial& parent = characteristic_derivative(MultiIndex(idx));
    return memo_.emplace(j, total_derivative(parent, last, opt_)).first->second;
  }

  Polynomial coefficient(const MultiIndex& j) {
    Polynomial r = characteristic_derivative(j);
    for (int s = 1; s <= g_.n; ++s) r = r + g_.xi(s) * Polynomial::jet(j.with(s));
    return r;
  }

  /// phi^J where the total derivatives are applied in the given tuple order
  /// (first entry applied first); used to confirm order independence.
  Polynomial coefficient_ordered(const std::vector<int>& tuple) const {
    Polynomial r = memo_.at(MultiIndex());
    for (int i : tuple) r = total_derivative(r, i, opt_);
    MultiIndex j(tuple);
    for (int s = 1; s <= g_.n; ++s) r = r + g_.xi(s) * Polynomial::jet(j.with(s));
    return r;
  }

 private:
  GeneratorCoefficients g_;
  DerivativeOptions opt_;
  std::map<MultiIndex, Polynomial> memo_;
};

inline ProlongedField prolong_recursive(const GeneratorCoefficients& g, int k, const DerivativeOptions& opt = {}) {
  if (k < 1) throw UnsupportedOrder("prolongation order must be at least 1");
  Prolongator pr(g, opt);
  ProlongedField out{g.n, k, {}};
  out.coeffs.emplace(MultiIndex(), g.phi());
  for (int order = 1; order <= k; ++order) {
    for (const auto& j : multi_indices(g.n, order)) out.coeffs.emplace(j, pr.coefficient(j));
  }
  return out;
}
inline ProlongedField prolong_recursive(const VectorField& v, int k) {
  return prolong_recursive(GeneratorCoefficients::of(v), k);
}
inline ProlongedField prolong_recursive(const SymbolicVectorField& v, int k, const DerivativeOptions& opt = {}) {
  return prolong_recursive(GeneratorCoefficients::of(v), k, opt);
}

/// pr^(k) v applied to F:
///   xi^i dF/dx^i + phi dF/du + sum_J phi^J dF/du_J,
/// the last sum over the sorted jet atoms u_J present in F.
inline Polynomial apply_prolonged(const GeneratorCoefficients& g, const Polynomial& f, int k,
                                  const DerivativeOptions& opt = {}) {
  int needed = jet_order(f);
  if (k < needed) {
    throw OrderTooLow("prolongation order " + std::to_string(k) + " is below the equation order " +
                      std::to_string(needed));
  }
  Prolongator pr(g, opt);
  PolyBuilder acc(f.size() * 8);
  for (Atom a : f.atoms()) {
    Polynomial df = partial_derivative(f, a);
    switch (a.kind()) {
      case Atom::Kind::Coord:
        acc.add_product(g.xi(a.coord_index()), df);
        break;
      case Atom::Kind::Dep:
        acc.add_product(g.phi(), df);
        break;
      case Atom::Kind::Jet:
        acc.add_product(pr.coefficient(a.multi_index()), df);
        break;
      case Atom::Kind::Theta:
        break;
      case Atom::Kind::FuncPartial:
        throw Error("equation polynomial must not contain unknown-function atoms");
    }
  }
  return acc.build();
}
inline Polynomial apply_prolonged(const VectorField& v, const Polynomial& f, int k) {
  return apply_prolonged(GeneratorCoefficients::of(v), f, k);
}
inline Polynomial apply_prolonged(const SymbolicVectorField& v, const Polynomial& f, int k,
                                  const DerivativeOptions& opt = {}) {
  return apply_prolonged(GeneratorCoefficients::of(v), f, k, opt);
}

}  // namespace liesym
