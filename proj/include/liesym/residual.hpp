#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "liesym/equations.hpp"
#include "liesym/errors.hpp"
#include "liesym/solution.hpp"

namespace liesym {

/// Finite-difference weights for the m-th derivative at 0 on the given nodes
/// (Fornberg's recursion, exact over the rationals).
inline std::vector<Rational> fornberg_weights(const std::vector<Rational>& nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  if (m < 0 || m >= n) throw Error("derivative order must be below the number of nodes");
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<Rational>> c(n, std::vector<Rational>(m + 1, Rational(0)));
  Rational c1(1);
  Rational c4 = nodes[0];
  c[0][0] = Rational(1);
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    Rational c2(1);
    Rational c5 = c4;
    c4 = nodes[i];
    for (int j = 0; j < i; ++j) {
      Rational c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (Rational(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - Rational(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Rational> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

/// Weights of the 9-point central stencil (nodes -4..4) for derivative m.
inline const std::vector<Rational>& central_stencil(int m) {
  static const std::vector<std::vector<Rational>> table = [] {
    std::vector<Rational> nodes;
    for (int k = -4; k <= 4; ++k) nodes.emplace_back(k);
    std::vector<std::vector<Rational>> t;
    for (int d = 0; d <= 4; ++d) t.push_back(fornberg_weights(nodes, d));
    return t;
  }();
  if (m < 0 || m > 4) throw UnsupportedOrder("central stencils cover derivative orders 0..4");
  return table[m];
}

/// Truncation order of the 9-point central stencil for derivative m.
inline int central_stencil_accuracy(int m) { return m <= 2 ? 8 : 6; }

/// A derivative estimate with its estimated error.
struct FdValue {
  Real value = 0;
  Real error = 0;
};

namespace detail {

/// Tensor-product stencil estimate of d^J u at x with step h.
inline Real stencil_derivative(const SolutionSample& s, const RealVector& x, const MultiIndex& j, const Real& h) {
  std::vector<int> dirs;
  std::vector<int> orders;
  for (int i = 1; i <= s.n; ++i) {
    int c = j.count(i);
    if (c > 0) {
      dirs.push_back(i - 1);
      orders.push_back(c);
    }
  }
  std::vector<std::vector<Real>> w;
  for (int o : orders) {
    std::vector<Real> row;
    for (const auto& r : central_stencil(o)) row.push_back(to_real(r));
    w.push_back(row);
  }
  const std::size_t dims = dirs.size();
  std::vector<int> idx(dims, 0);
  Real sum = 0;
  while (true) {
    Real weight = 1;
    RealVector pt = x;
    for (std::size_t d = 0; d < dims; ++d) {
      weight *= w[d][idx[d]];
      pt[dirs[d]] += Real(idx[d] - 4) * h;
    }
    if (weight != 0) sum += weight * s(pt);
    std::size_t d = 0;
    while (d < dims && ++idx[d] == 9) idx[d++] = 0;
    if (d == dims) break;
  }
  int total = 0;
  for (int o : orders) total += o;
  return sum / pow(h, total);
}

}  // namespace detail

/// d^J u(x) by 9-point central differences with one Richardson step (h, h/2);
/// h is halved from h0 until the estimated error drops below `target`.
inline FdValue fd_derivative(const SolutionSample& s, const RealVector& x, const MultiIndex& j, Real h0,
                             const Real& target = Real("1e-8")) {
  if (j.empty()) return {s(x), Real(0)};
  int acc = 100;
  for (int i = 1; i <= s.n; ++i) {
    if (j.count(i)) acc = std::min(acc, central_stencil_accuracy(j.count(i)));
  }
  const Real factor = pow(Real(2), acc);
  FdValue best;
  bool have = false;
  Real h = h0;
  for (int round = 0; round < 12; ++round) {
    Real coarse = detail::stencil_derivative(s, x, j, h);
    Real fine = detail::stencil_derivative(s, x, j, h / 2);
    FdValue v{(factor * fine - coarse) / (factor - 1), abs(fine - coarse) / (factor - 1)};
    if (!have || v.error < best.error) {
      best = v;
      have = true;
    }
    if (best.error < target * Real("1e-3")) break;
    h /= 2;
  }
  return best;
}

/// F evaluated on the jets of a polynomial solution: an exact polynomial in x
/// (and theta when symbolic).
inline Polynomial residual_polynomial(const SolutionSample& s, const PdeSystem& sys) {
  if (!s.is_polynomial()) throw Error("exact residual needs a polynomial solution");
  if (s.n != sys.n) throw Error("solution and equation have different dimensions");
  std::unordered_map<Atom, Polynomial> subs;
  subs.emplace(Atom::dep(), s.poly);
  for (Atom a : sys.f.atoms()) {
    if (!a.is(Atom::Kind::Jet)) continue;
    Polynomial d = s.poly;
    const MultiIndex j = a.multi_index();
    for (int i : j.indices()) d = partial_derivative(d, Atom::coord(i));
    subs.emplace(a, d);
  }
  return substitute(sys.f, subs);
}

struct ResidualValue {
  RealVector point;
  Real value = 0;
  Real error = 0;  // estimated error of `value` (0 when exact)
  bool exact = false;
};

/// F at each point: exact for polynomial solutions, otherwise from
/// finite-difference jets. A symbolic theta must be pinned via `theta`.
inline std::vector<ResidualValue> residual(const SolutionSample& s, const PdeSystem& sys,
                                           const std::vector<RealVector>& points,
                                           std::optional<Rational> theta = std::nullopt) {
  if (s.n != sys.n) throw Error("solution and equation have different dimensions");
  Polynomial f = sys.f;
  if (f.contains(Atom::theta())) {
    if (!theta) throw Error("theta is symbolic; a value is needed to evaluate the residual");
    f = substitute(f, Atom::theta(), Polynomial(*theta));
  }
  std::vector<ResidualValue> out;
  if (s.is_polynomial()) {
    PdeSystem pinned = sys;
    pinned.f = f;
    Polynomial r = residual_polynomial(s, pinned);
    for (const auto& p : points) {
      ResidualValue v;
      v.point = p;
      v.exact = true;
      v.value = SolutionSample::polynomial(s.n, r, "")(p);
      out.push_back(v);
    }
    return out;
  }
  const Real h0 = s.radius / Real(16);
  for (const auto& p : points) {
    std::map<Atom, FdValue> jets;
    for (Atom a : f.atoms()) {
      if (a.is(Atom::Kind::Jet)) jets[a] = fd_derivative(s, p, a.multi_index(), h0);
    }
    ResidualValue v;
    v.point = p;
    v.value = evaluate_with<Real>(
        f,
        [&](Atom a) -> Real {
          if (a.is(Atom::Kind::Coord)) return p.at(a.coord_index() - 1);
          if (a.is(Atom::Kind::Dep)) return s(p);
          return jets.at(a).value;
        },
        [](const Rational& c) { return to_real(c); }, Real(0));
    // First-order propagation of the jet errors through F.
    Real err = 0;
    for (const auto& [a, fd] : jets) {
      Polynomial df = partial_derivative(f, a);
      Real g = evaluate_with<Real>(
          df,
          [&](Atom b) -> Real {
            if (b.is(Atom::Kind::Coord)) return p.at(b.coord_index() - 1);
            if (b.is(Atom::Kind::Dep)) return s(p);
            return jets.at(b).value;
          },
          [](const Rational& c) { return to_real(c); }, Real(0));
      err += abs(g) * fd.error;
    }
    v.error = err;
    out.push_back(v);
  }
  return out;
}

/// `count` points spread deterministically inside the solution's domain hint.
inline std::vector<RealVector> domain_points(const SolutionSample& s, int count, Real fraction = Real("0.5")) {
  std::vector<RealVector> pts;
  for (int k = 0; k < count; ++k) {
    RealVector p = s.center;
    for (int i = 0; i < s.n; ++i) {
      // Low-discrepancy offsets in [-1, 1].
      Real t = Real(((k + 1) * (2 * i + 3) * 7919) % 1000) / Real(500) - Real(1);
      p[i] += fraction * s.radius * t;
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace liesym
