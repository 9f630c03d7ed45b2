#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "liesym/equations.hpp"
#include "liesym/errors.hpp"
#include "liesym/matrix.hpp"
#include "liesym/polynomial.hpp"

namespace liesym {

/// Exact assignment to x, u and every jet atom up to the system order (and
/// theta when the system keeps it symbolic).
struct JetPoint {
  Env env;

  const Rational& at(Atom a) const {
    auto it = env.find(a);
    if (it == env.end()) throw MissingAtom("jet point has no value for " + a.str());
    return it->second;
  }

  RationalMatrix hessian(int n) const {
    RationalMatrix h(n, n);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) h(i - 1, j - 1) = at(Atom::jet({i, j}));
    }
    return h;
  }
};

/// Leading principal minors of a square matrix, smallest first.
inline std::vector<Rational> leading_minors(const RationalMatrix& m) {
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    RationalMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
    }
    out.push_back(sym_det(sub));
  }
  return out;
}

inline bool is_positive_definite(const RationalMatrix& m) {
  for (const auto& d : leading_minors(m)) {
    if (d.sign() <= 0) return false;
  }
  return true;
}

/// SplitMix64 step; used to derive independent per-sample seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

/// Small random rationals: numerator in [-9, 9], denominator in {1, 2, 3}.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational next() {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 3);
    int p = num(rng_);
    return Rational(p) / Rational(den(rng_));
  }
  Rational next_positive() {
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(1, 3);
    int p = num(rng_);
    return Rational(p) / Rational(den(rng_));
  }

 private:
  std::mt19937_64 rng_;
};

/// Value of top_var making F vanish at env (which must assign every other
/// atom of F); throws Error when the coefficient of top_var vanishes there.
inline Rational solve_top_var(const PdeSystem& sys, const Env& env) {
  std::vector<Polynomial> c = sys.f.coefficients_in(sys.top_var);
  if (c.size() > 2) throw Error("equation is not affine-linear in " + sys.top_var.str());
  Rational b = evaluate(c[0], env);
  Rational a = c.size() > 1 ? evaluate(c[1], env) : Rational(0);
  if (a.is_zero()) throw Error("coefficient of " + sys.top_var.str() + " vanishes");
  return -b / a;
}

namespace detail {

inline std::optional<JetPoint> try_sample(const PdeSystem& sys, const std::vector<Polynomial>& c, RationalSampler& rs) {
  const int n = sys.n;
  JetPoint p;
  for (int i = 1; i <= n; ++i) p.env[Atom::coord(i)] = rs.next();
  p.env[Atom::dep()] = rs.next();
  if (sys.theta_symbolic()) p.env[Atom::theta()] = rs.next_positive();
  for (int i = 1; i <= n; ++i) p.env[Atom::jet({i})] = rs.next();

  if (sys.order >= 2) {
    RationalMatrix l(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) l(i, j) = rs.next();
    }
    RationalMatrix h = l * l.transpose() + RationalMatrix::identity(n);
    for (int i = 1; i <= n; ++i) {
      for (int j = i; j <= n; ++j) p.env[Atom::jet({i, j})] = h(i - 1, j - 1);
    }
  }
  for (int order = 3; order <= sys.order; ++order) {
    for (const auto& j : multi_indices(n, order)) p.env[Atom::jet(j)] = rs.next();
  }
  p.env.erase(sys.top_var);

  Rational a = c.size() > 1 ? evaluate(c[1], p.env) : Rational(0);
  if (a.is_zero()) return std::nullopt;
  p.env[sys.top_var] = -evaluate(c[0], p.env) / a;

  if (sys.convexity_required && sys.order >= 2 && !is_positive_definite(p.hessian(n))) return std::nullopt;
  return p;
}

}  // namespace detail

/// One on-variety point from its own seed; resamples up to `budget` times.
inline JetPoint sample_point(const PdeSystem& sys, std::uint64_t seed, int budget = 100) {
  RationalSampler rs(seed);
  std::vector<Polynomial> c = sys.f.coefficients_in(sys.top_var);
  for (int attempt = 0; attempt < budget; ++attempt) {
    if (auto p = detail::try_sample(sys, c, rs)) return *p;
  }
  throw SamplingExhausted("no admissible jet point after " + std::to_string(budget) + " attempts");
}

/// `count` points; point k is drawn from derive_seed(seed, k), so any subset
/// can be regenerated independently.
inline std::vector<JetPoint> sample_on_variety(const PdeSystem& sys, std::uint64_t seed, int count,
                                               int budget = 100) {
  if (count < 1) throw Error("sample count must be at least 1");
  std::vector<JetPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(sample_point(sys, derive_seed(seed, k), budget));
  return out;
}

}  // namespace liesym
