#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/jet.hpp"
#include "liesym/polynomial.hpp"
#include "liesym/prolongation.hpp"

namespace liesym {

/// Closed-form prolongation coefficients up to fourth order, written as sums of
/// index patterns (xi^s_{jku} u_s u_i, ...) over the slot labels i, j, k, l and
/// a summed dummy s.
namespace formal {

inline constexpr int kDummy = -1;

struct Factor {
  enum class Kind { Field, Jet };
  Kind kind = Kind::Jet;
  bool xi = false;          // Field: xi^s (true) or phi (false)
  int ucount = 0;           // Field: number of u-derivatives
  std::vector<int> labels;  // x-derivative labels (Field) or jet labels (Jet)

  auto key() const {
    std::vector<int> l = labels;
    std::sort(l.begin(), l.end());
    return std::make_tuple(static_cast<int>(kind), xi, ucount, l);
  }
};

struct Term {
  int coef = 1;
  std::vector<Factor> factors;

  bool has_dummy() const {
    for (const auto& f : factors) {
      if (f.xi || std::count(f.labels.begin(), f.labels.end(), kDummy)) return true;
    }
    return false;
  }

  /// Canonical form under the symmetry of lower indices and commutativity.
  auto signature() const {
    std::vector<decltype(factors[0].key())> keys;
    for (const auto& f : factors) keys.push_back(f.key());
    std::sort(keys.begin(), keys.end());
    return std::make_pair(coef, keys);
  }

  std::string str() const {
    static const char* names = "ijkl";
    std::string out = coef < 0 ? "-" : "";
    if (coef != 1 && coef != -1) out += std::to_string(std::abs(coef)) + " ";
    for (std::size_t n = 0; n < factors.size(); ++n) {
      const auto& f = factors[n];
      if (n) out += " ";
      out += f.kind == Factor::Kind::Jet ? "u" : (f.xi ? "xi" : "phi");
      if (f.labels.empty() && f.ucount == 0) continue;
      out += "_";
      for (int l : f.labels) out += l == kDummy ? 's' : names[l];
      out += std::string(f.ucount, 'u');
    }
    return out;
  }
};

using Pattern = std::vector<Term>;

/// Reads one term such as "-xi_jku u_s u_i": factors separated by spaces, a
/// leading sign, phi/xi with derivative labels from {i,j,k,l,u}, jets u_<labels>
/// with labels from {i,j,k,l,s}.
inline Term term(const std::string& text) {
  Term t;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip();
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    if (text[pos] == '-') t.coef = -1;
    ++pos;
  }
  auto label = [](char c) -> int {
    switch (c) {
      case 'i': return 0;
      case 'j': return 1;
      case 'k': return 2;
      case 'l': return 3;
      case 's': return kDummy;
    }
    throw Error(std::string("bad label '") + c + "' in formal term");
  };
  for (skip(); pos < text.size(); skip()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    pos = end;
    Factor f;
    std::string head = tok.substr(0, tok.find('_'));
    std::string sub = tok.find('_') == std::string::npos ? "" : tok.substr(tok.find('_') + 1);
    if (head == "u") {
      f.kind = Factor::Kind::Jet;
      for (char c : sub) f.labels.push_back(label(c));
    } else if (head == "phi" || head == "xi") {
      f.kind = Factor::Kind::Field;
      f.xi = head == "xi";
      for (char c : sub) {
        if (c == 'u') {
          ++f.ucount;
        } else {
          f.labels.push_back(label(c));
        }
      }
    } else {
      throw Error("bad factor '" + tok + "' in formal term");
    }
    t.factors.push_back(std::move(f));
  }
  return t;
}

inline Pattern pattern(std::initializer_list<const char*> terms) {
  Pattern p;
  for (const char* s : terms) p.push_back(term(s));
  return p;
}

/// Distinct images of a term under all permutations of its m slot labels.
inline Pattern orbit(const Term& t, int m) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Pattern out;
  std::set<decltype(t.signature())> seen;
  do {
    Term img = t;
    for (auto& f : img.factors) {
      for (auto& l : f.labels) {
        if (l != kDummy) l = perm[l];
      }
    }
    if (seen.insert(img.signature()).second) out.push_back(std::move(img));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace formal

/// Memoised partial derivatives d^|a|/dx^a d^b/du^b of the generator
/// coefficients.
class FieldPartials {
 public:
  explicit FieldPartials(GeneratorCoefficients g) : g_(std::move(g)) {}

  const GeneratorCoefficients& generator() const { return g_; }

  const Polynomial& get(FuncId f, const MultiIndex& a, int b) {
    auto key = std::make_tuple(f, a, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Polynomial r;
    if (b > 0) {
      r = dep_partial(get(f, a, b - 1));
    } else if (!a.empty()) {
      std::vector<int> idx = a.indices();
      int last = idx.back();
      idx.pop_back();
      r = coordinate_partial(get(f, MultiIndex(idx), 0), last);
    } else {
      r = g_.coeff[f];
    }
    return memo_.emplace(key, std::move(r)).first->second;
  }

 private:
  GeneratorCoefficients g_;
  std::map<std::tuple<FuncId, MultiIndex, int>, Polynomial> memo_;
};

namespace detail {

inline Polynomial evaluate_term(const formal::Term& t, const std::vector<int>& idx, FieldPartials& fp) {
  const int n = fp.generator().n;
  const bool dummy = t.has_dummy();
  Polynomial total;
  for (int s = 1; s <= (dummy ? n : 1); ++s) {
    auto resolve = [&](int label) { return label == formal::kDummy ? s : idx.at(label); };
    Polynomial prod(t.coef);
    for (const auto& f : t.factors) {
      std::vector<int> ix;
      for (int l : f.labels) ix.push_back(resolve(l));
      if (f.kind == formal::Factor::Kind::Jet) {
        prod = prod * Polynomial::jet(MultiIndex(ix));
      } else {
        prod = prod * fp.get(f.xi ? s : kPhi, MultiIndex(ix), f.ucount);
      }
      if (prod.is_zero()) break;
    }
    total = total + prod;
  }
  return total;
}

}  // namespace detail

/// The distinct circle summation of every term of `p` over the slot labels,
/// listed as formal terms.
inline formal::Pattern circle_orbit(const formal::Pattern& p, int m) {
  formal::Pattern out;
  for (const auto& t : p) {
    auto o = formal::orbit(t, m);
    out.insert(out.end(), o.begin(), o.end());
  }
  return out;
}

/// Sum_circ p(i,j,k[,l]) at concrete indices (slot labels bound in order).
inline Polynomial circle_sum(const formal::Pattern& p, const std::vector<int>& indices, FieldPartials& fp) {
  Polynomial r;
  for (const auto& t : circle_orbit(p, static_cast<int>(indices.size()))) {
    r = r + detail::evaluate_term(t, indices, fp);
  }
  return r;
}
inline Polynomial circle_sum(const formal::Pattern& p, const std::vector<int>& indices,
                             const GeneratorCoefficients& g) {
  FieldPartials fp(g);
  return circle_sum(p, indices, fp);
}

/// Plain (non-circled) sum of the terms of p at concrete indices.
inline Polynomial literal_sum(const formal::Pattern& p, const std::vector<int>& indices, FieldPartials& fp) {
  Polynomial r;
  for (const auto& t : p) r = r + detail::evaluate_term(t, indices, fp);
  return r;
}

namespace families {

// Third order: T_m = sum_alpha Sum_circ A^(m)_alpha(i,j,k).
inline const formal::Pattern& A(int m, int alpha) {
  static const std::array<std::array<formal::Pattern, 2>, 3> table{{
      {{formal::pattern({"phi_jku u_i", "phi_kuu u_j u_i", "-xi_jku u_s u_i", "-xi_kuu u_j u_s u_i"}),
        formal::pattern({"phi_uuu u_i u_j u_k", "-xi_uuu u_s u_i u_j u_k", "-xi_ijk u_s"})}},
      {{formal::pattern({"phi_ku u_ij", "phi_uu u_k u_ij", "-xi_ku u_s u_ij", "-xi_uu u_k u_s u_ij"}),
        formal::pattern({"-xi_jk u_is", "-xi_ku u_j u_is", "-xi_uu u_j u_k u_is", "-xi_u u_jk u_is"})}},
      {{formal::pattern({"phi_u u_ijk", "-xi_u u_s u_ijk"}), formal::pattern({"-xi_i u_jks", "-xi_u u_i u_jks"})}},
  }};
  if (m < 1 || m > 3 || alpha < 1 || alpha > 2) throw Error("no third-order family A(" + std::to_string(m) + "," +
                                                            std::to_string(alpha) + ")");
  return table[m - 1][alpha - 1];
}

inline int A_count(int m) { return (m >= 1 && m <= 3) ? 2 : 0; }

// Fourth order: F_m = sum_alpha Sum_circ B^(m)_alpha(i,j,k,l).
inline const formal::Pattern& B(int m, int alpha) {
  static const std::array<std::vector<formal::Pattern>, 4> table{{
      {formal::pattern({"phi_jklu u_i", "phi_kluu u_j u_i", "phi_luuu u_j u_k u_i"}),
       formal::pattern({"-xi_jklu u_s u_i", "-xi_kluu u_j u_s u_i", "-xi_luuu u_j u_k u_s u_i"}),
       formal::pattern({"phi_uuuu u_i u_j u_k u_l", "-xi_uuuu u_s u_i u_j u_k u_l", "-xi_ijkl u_s"})},
      {formal::pattern({"phi_klu u_ij", "phi_luu u_k u_ij", "phi_uuu u_k u_l u_ij", "phi_uu u_kl u_ij"}),
       formal::pattern({"-xi_klu u_s u_ij", "-xi_luu u_k u_s u_ij", "-xi_uuu u_k u_l u_s u_ij",
                        "-xi_uu u_kl u_s u_ij"}),
       formal::pattern({"-xi_jkl u_is", "-xi_klu u_j u_is", "-xi_luu u_j u_k u_is", "-xi_uuu u_j u_k u_l u_is"}),
       formal::pattern({"-xi_lu u_jk u_is", "-xi_uu u_l u_jk u_is"})},
      {formal::pattern({"phi_iu u_jkl", "phi_uu u_i u_jkl", "-xi_iu u_s u_jkl", "-xi_uu u_i u_s u_jkl"}),
       formal::pattern({"-xi_kl u_ijs", "-xi_lu u_k u_ijs", "-xi_uu u_k u_l u_ijs", "-xi_u u_kl u_ijs",
                        "-xi_u u_is u_jkl"})},
      {formal::pattern({"phi_u u_ijkl", "-xi_u u_s u_ijkl"}), formal::pattern({"-xi_i u_jkls", "-xi_u u_i u_jkls"})},
  }};
  if (m < 1 || m > 4 || alpha < 1 || alpha > static_cast<int>(table[m - 1].size())) {
    throw Error("no fourth-order family B(" + std::to_string(m) + "," + std::to_string(alpha) + ")");
  }
  return table[m - 1][alpha - 1];
}

inline int B_count(int m) {
  static const int counts[] = {3, 4, 2, 2};
  return (m >= 1 && m <= 4) ? counts[m - 1] : 0;
}

inline const formal::Pattern& first_order() {
  static const formal::Pattern p = formal::pattern({"phi_i", "phi_u u_i", "-xi_i u_s", "-xi_u u_i u_s"});
  return p;
}

inline const formal::Pattern& second_order() {
  static const formal::Pattern p = formal::pattern(
      {"phi_ij", "phi_ju u_i", "phi_iu u_j", "phi_uu u_i u_j", "phi_u u_ij", "-xi_ij u_s", "-xi_ju u_i u_s",
       "-xi_iu u_j u_s", "-xi_uu u_i u_j u_s", "-xi_u u_ij u_s", "-xi_i u_js", "-xi_u u_i u_js", "-xi_j u_is",
       "-xi_u u_j u_is"});
  return p;
}

}  // namespace families

/// {phi_ijk, T1, T2, T3} at concrete indices.
inline std::array<Polynomial, 4> third_order_parts(FieldPartials& fp, int i, int j, int k) {
  std::vector<int> idx{i, j, k};
  std::array<Polynomial, 4> parts;
  parts[0] = fp.get(kPhi, MultiIndex(idx), 0);
  for (int m = 1; m <= 3; ++m) {
    for (int a = 1; a <= families::A_count(m); ++a) parts[m] = parts[m] + circle_sum(families::A(m, a), idx, fp);
  }
  return parts;
}

/// {phi_ijkl, F1, F2, F3, F4} at concrete indices.
inline std::array<Polynomial, 5> fourth_order_parts(FieldPartials& fp, int i, int j, int k, int l) {
  std::vector<int> idx{i, j, k, l};
  std::array<Polynomial, 5> parts;
  parts[0] = fp.get(kPhi, MultiIndex(idx), 0);
  for (int m = 1; m <= 4; ++m) {
    for (int a = 1; a <= families::B_count(m); ++a) parts[m] = parts[m] + circle_sum(families::B(m, a), idx, fp);
  }
  return parts;
}

/// Prolongation coefficients from the closed formulas for orders 1..k, k in 2..4.
inline ProlongedField prolong_explicit(const GeneratorCoefficients& g, int k) {
  if (k < 2 || k > 4) throw UnsupportedOrder("explicit prolongation is available for orders 2 to 4 only");
  FieldPartials fp(g);
  ProlongedField out{g.n, k, {}};
  out.coeffs.emplace(MultiIndex(), g.phi());
  for (int order = 1; order <= k; ++order) {
    for (const auto& j : multi_indices(g.n, order)) {
      const auto& ix = j.indices();
      Polynomial c;
      switch (order) {
        case 1:
          c = literal_sum(families::first_order(), ix, fp);
          break;
        case 2:
          c = literal_sum(families::second_order(), ix, fp);
          break;
        case 3:
          for (const auto& p : third_order_parts(fp, ix[0], ix[1], ix[2])) c = c + p;
          break;
        default:
          for (const auto& p : fourth_order_parts(fp, ix[0], ix[1], ix[2], ix[3])) c = c + p;
          break;
      }
      out.coeffs.emplace(j, std::move(c));
    }
  }
  return out;
}
inline ProlongedField prolong_explicit(const VectorField& v, int k) {
  return prolong_explicit(GeneratorCoefficients::of(v), k);
}
inline ProlongedField prolong_explicit(const SymbolicVectorField& v, int k) {
  return prolong_explicit(GeneratorCoefficients::of(v), k);
}

}  // namespace liesym
