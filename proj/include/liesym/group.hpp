#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/generators.hpp"
#include "liesym/jet.hpp"
#include "liesym/matrix.hpp"
#include "liesym/solution.hpp"

namespace liesym {

/// Affine map of (x,u)-space
///   x~ = Q x + P u + R,   u~ = D.x + c u + d
/// held as the (N+1)x(N+1) block [[Q, P], [D, c]] and the shift [R, d].
template <class S>
struct BasicGroupElement {
  int n = 1;
  Matrix<S> linear;  // (N+1) x (N+1)
  std::vector<S> shift;  // N+1
  Regime regime = Regime::AMSpecial;
  bool local = false;

  static BasicGroupElement identity(int n) {
    BasicGroupElement g;
    g.n = n;
    g.linear = Matrix<S>::identity(n + 1);
    g.shift.assign(n + 1, S(0));
    return g;
  }

  Matrix<S> q() const {
    Matrix<S> m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = linear(i, j);
    }
    return m;
  }
  std::vector<S> p() const {
    std::vector<S> v(n);
    for (int i = 0; i < n; ++i) v[i] = linear(i, n);
    return v;
  }
  std::vector<S> d_row() const {
    std::vector<S> v(n);
    for (int j = 0; j < n; ++j) v[j] = linear(n, j);
    return v;
  }
  const S& c() const { return linear(n, n); }
  std::vector<S> r() const { return std::vector<S>(shift.begin(), shift.begin() + n); }
  const S& d() const { return shift[n]; }

  bool has_p() const {
    for (int i = 0; i < n; ++i) {
      if (!(linear(i, n) == S(0))) return true;
    }
    return false;
  }

  /// (N+2)x(N+2) homogeneous matrix [[linear, shift], [0, 1]].
  Matrix<S> homogeneous() const {
    Matrix<S> h(n + 2, n + 2);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) h(i, j) = linear(i, j);
      h(i, n + 1) = shift[i];
    }
    h(n + 1, n + 1) = S(1);
    return h;
  }

  static BasicGroupElement from_homogeneous(int n, const Matrix<S>& h) {
    BasicGroupElement g;
    g.n = n;
    g.linear = Matrix<S>(n + 1, n + 1);
    g.shift.assign(n + 1, S(0));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) g.linear(i, j) = h(i, j);
      g.shift[i] = h(i, n + 1);
    }
    g.local = g.has_p();
    return g;
  }

  /// (x, u) -> (x~, u~)
  std::vector<S> apply(const std::vector<S>& xu) const {
    std::vector<S> out(n + 1, S(0));
    for (int i = 0; i <= n; ++i) {
      S acc = shift[i];
      for (int j = 0; j <= n; ++j) acc = acc + linear(i, j) * xu[j];
      out[i] = acc;
    }
    return out;
  }

  /// this after h.
  BasicGroupElement compose(const BasicGroupElement& h) const {
    return from_homogeneous(n, homogeneous() * h.homogeneous());
  }

  friend bool operator==(const BasicGroupElement& a, const BasicGroupElement& b) {
    return a.n == b.n && a.linear == b.linear && a.shift == b.shift;
  }
};

using GroupElement = BasicGroupElement<Rational>;
using NumericGroupElement = BasicGroupElement<Real>;

inline NumericGroupElement to_numeric(const GroupElement& g) {
  NumericGroupElement r;
  r.n = g.n;
  r.linear = Matrix<Real>(g.n + 1, g.n + 1);
  for (int i = 0; i <= g.n; ++i) {
    for (int j = 0; j <= g.n; ++j) r.linear(i, j) = to_real(g.linear(i, j));
  }
  for (const auto& s : g.shift) r.shift.push_back(to_real(s));
  r.regime = g.regime;
  r.local = g.local;
  return r;
}

namespace detail {

inline void check_len(const std::vector<Rational>& v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) throw Error(std::string(what) + " must have N entries");
}

}  // namespace detail

/// Q = lambda * Abar, c = lambda^2, P = 0, x-shift B, u-row D, u-shift d.
inline GroupElement make_ma_element(const Rational& lambda, const RationalMatrix& abar, const std::vector<Rational>& b,
                                    const std::vector<Rational>& dvec, const Rational& d) {
  const int n = static_cast<int>(abar.rows());
  if (!abar.is_square() || n < 1) throw NonSquare();
  if (lambda.sign() <= 0) throw Error("lambda must be positive");
  if (!sym_det(abar).is_one()) throw DetNotOne("det(Abar) = " + sym_det(abar).str() + ", expected 1");
  detail::check_len(b, n, "B");
  detail::check_len(dvec, n, "D");
  GroupElement g = GroupElement::identity(n);
  g.regime = Regime::MA;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.linear(i, j) = lambda * abar(i, j);
    g.linear(n, i) = dvec[i];
    g.shift[i] = b[i];
  }
  g.linear(n, n) = lambda * lambda;
  g.shift[n] = d;
  return g;
}

/// Block form [[Q, P], [D, c]] with shift [R, d]. P must vanish unless the
/// regime is AMSpecial; the action is only local when P != 0.
inline GroupElement make_am_element(const RationalMatrix& q, const std::vector<Rational>& p,
                                    const std::vector<Rational>& dvec, const Rational& c,
                                    const std::vector<Rational>& r, const Rational& d, Regime regime) {
  const int n = static_cast<int>(q.rows());
  if (!q.is_square() || n < 1) throw NonSquare();
  detail::check_len(p, n, "P");
  detail::check_len(dvec, n, "D");
  detail::check_len(r, n, "R");
  GroupElement g = GroupElement::identity(n);
  g.regime = regime;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.linear(i, j) = q(i, j);
    g.linear(i, n) = p[i];
    g.linear(n, i) = dvec[i];
    g.shift[i] = r[i];
  }
  g.linear(n, n) = c;
  g.shift[n] = d;
  if (sym_det(g.linear).is_zero()) throw Singular("block matrix [[Q, P], [D, c]] is singular");
  if (g.has_p() && regime != Regime::AMSpecial) {
    throw PNotAllowed("P must vanish outside the special theta regime");
  }
  if (regime == Regime::MA && (g.has_p())) throw PNotAllowed("P must vanish for Monge-Ampere elements");
  g.local = g.has_p();
  return g;
}

/// Monge-Ampere group membership: P = 0, det Q > 0 and det(Q)^2 = c^N.
inline bool is_ma_element(const GroupElement& g) {
  if (g.has_p()) return false;
  Rational dq = sym_det(g.q());
  return dq.sign() > 0 && dq * dq == pow(g.c(), static_cast<unsigned>(g.n));
}

/// Affine maximal membership: invertible, and P = 0 unless special regime.
inline bool is_am_element(const GroupElement& g, Regime regime) {
  if (sym_det(g.linear).is_zero()) return false;
  return regime == Regime::AMSpecial || !g.has_p();
}

// ---------------------------------------------------------------------------
// Exponentials of affine generators

/// (N+2)x(N+2) homogeneous matrix of an affine field on coordinates (x, u, 1).
inline RationalMatrix generator_matrix(const VectorField& v) {
  const int n = v.dim();
  RationalMatrix m(n + 2, n + 2);
  for (FuncId f = 0; f <= n; ++f) {
    int row = f == kPhi ? n : f - 1;
    const Polynomial& c = v.coefficient(f);
    if (c.total_degree() > 1) throw NotAffine("generator coefficient is not affine: " + c.str());
    for (const auto& t : c.terms()) {
      if (t.mono.is_one()) {
        m(row, n + 1) = t.coef;
        continue;
      }
      Atom a = t.mono.factors().front().atom;
      m(row, a.is(Atom::Kind::Dep) ? n : a.coord_index() - 1) = t.coef;
    }
  }
  return m;
}

template <class T>
bool is_nilpotent(const Matrix<T>& m) {
  Matrix<T> p = m;
  for (std::size_t k = 1; k < m.rows(); ++k) p = p * m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!(p(i, j) == T(0))) return false;
    }
  }
  return true;
}

struct Exponential {
  bool exact = false;
  std::optional<GroupElement> exact_element;  // set when the generator matrix is nilpotent
  NumericGroupElement element;
  Real error_bound = 0;  // bound on the entrywise error of `element`
};

namespace detail {

template <class T>
T max_abs(const Matrix<T>& m) {
  T best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      T a = m(i, j) < T(0) ? T(-m(i, j)) : m(i, j);
      if (a > best) best = a;
    }
  }
  return best;
}

/// exp(A) by scaling and squaring with a Taylor polynomial; returns the
/// matrix and an entrywise error bound.
inline std::pair<Matrix<Real>, Real> real_expm(const Matrix<Real>& a) {
  const std::size_t n = a.rows();
  Real norm = max_abs(a) * Real(static_cast<long>(n));  // bounds the infinity norm
  int squarings = 0;
  Real scaled = norm;
  while (scaled > Real(0.5)) {
    scaled /= 2;
    ++squarings;
  }
  Matrix<Real> b = Real(1) / pow(Real(2), squarings) * a;
  Matrix<Real> sum = Matrix<Real>::identity(n);
  Matrix<Real> term = Matrix<Real>::identity(n);
  const int terms = 40;
  for (int k = 1; k <= terms; ++k) {
    term = Real(1) / Real(k) * (term * b);
    sum = sum + term;
  }
  // Taylor remainder of exp at ||B|| <= 1/2, then propagated through the
  // squarings (each squaring at most triples a relative error for ||e^B|| <= 2).
  Real tail = pow(scaled, terms + 1) * Real(2) / boost::multiprecision::tgamma(Real(terms + 2));
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  Real bound = (tail + std::numeric_limits<Real>::epsilon() * Real(64)) * pow(Real(3), squarings) *
               (Real(1) + max_abs(sum));
  return {sum, bound};
}

}  // namespace detail

/// exp(eps v) as a group element. Exact (finite series) when the generator
/// matrix is nilpotent, otherwise in Real with an error bound.
inline Exponential exponentiate(const VectorField& v, const Rational& eps) {
  const int n = v.dim();
  RationalMatrix m = generator_matrix(v);
  Exponential out;
  if (is_nilpotent(m)) {
    RationalMatrix a = eps * m;
    RationalMatrix sum = RationalMatrix::identity(n + 2);
    RationalMatrix term = RationalMatrix::identity(n + 2);
    for (int k = 1; k < n + 2; ++k) {
      term = Rational(1, k) * (term * a);
      sum = sum + term;
    }
    GroupElement g = GroupElement::from_homogeneous(n, sum);
    out.exact = true;
    out.exact_element = g;
    out.element = to_numeric(g);
    return out;
  }
  Matrix<Real> a(n + 2, n + 2);
  Real e = to_real(eps);
  for (int i = 0; i < n + 2; ++i) {
    for (int j = 0; j < n + 2; ++j) a(i, j) = e * to_real(m(i, j));
  }
  auto [h, bound] = detail::real_expm(a);
  out.element = NumericGroupElement::from_homogeneous(n, h);
  out.error_bound = bound;
  return out;
}

// ---------------------------------------------------------------------------
// Action on solutions

namespace detail {

/// Solves A y = b in Real with partial pivoting; returns false if singular.
inline bool real_solve(Matrix<Real> a, RealVector b, RealVector& y) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs(a(r, col)) > abs(a(piv, col))) piv = r;
    }
    if (abs(a(piv, col)) < Real(1e-40)) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      Real f = a(r, col) / a(col, col);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  y.assign(n, Real(0));
  for (std::size_t r = n; r-- > 0;) {
    Real acc = b[r];
    for (std::size_t j = r + 1; j < n; ++j) acc -= a(r, j) * y[j];
    y[r] = acc / a(r, r);
  }
  return true;
}

/// Gradient of a solution: exact for polynomials, central differences otherwise.
inline RealVector gradient(const SolutionSample& s, const RealVector& x) {
  RealVector g(s.n);
  if (s.is_polynomial()) {
    for (int i = 1; i <= s.n; ++i) {
      SolutionSample d = SolutionSample::polynomial(s.n, partial_derivative(s.poly, Atom::coord(i)), "");
      g[i - 1] = d(x);
    }
    return g;
  }
  const Real h("1e-12");
  for (int i = 0; i < s.n; ++i) {
    RealVector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (s(xp) - s(xm)) / (Real(2) * h);
  }
  return g;
}

}  // namespace detail

/// Exact transform for P = 0 and a polynomial input:
///   u~(x~) = D.x + c u(x) + d,  x = Q^{-1}(x~ - R).
inline SolutionSample act_exact(const GroupElement& g, const SolutionSample& s) {
  if (g.has_p()) throw Error("exact action requires P = 0");
  if (!s.is_polynomial()) throw Error("exact action requires a polynomial solution");
  if (g.n != s.n) throw Error("group element and solution have different dimensions");
  const int n = g.n;
  RationalMatrix qinv = inverse(g.q());
  std::vector<Rational> r = g.r();
  std::unordered_map<Atom, Polynomial> subs;
  std::vector<Polynomial> x(n);
  for (int i = 0; i < n; ++i) {
    Polynomial xi;
    for (int j = 0; j < n; ++j) {
      if (!qinv(i, j).is_zero()) xi = xi + (Polynomial::x(j + 1) - Polynomial(r[j])) * qinv(i, j);
    }
    x[i] = xi;
    subs.emplace(Atom::coord(i + 1), xi);
  }
  Polynomial out = substitute(s.poly, subs) * g.c() + Polynomial(g.d());
  std::vector<Rational> dv = g.d_row();
  for (int i = 0; i < n; ++i) {
    if (!dv[i].is_zero()) out = out + x[i] * dv[i];
  }
  SolutionSample t = SolutionSample::polynomial(n, std::move(out), "transformed " + s.description);
  for (int i = 0; i < n; ++i) {
    Real acc = to_real(r[i]);
    for (int j = 0; j < n; ++j) acc += to_real(g.linear(i, j)) * s.center[j];
    t.center[i] = acc;
  }
  t.radius = s.radius;
  return t;
}

/// General action in Real. For P != 0 the inverse point map
/// x~ = Q x + P u(x) + R is found by Newton's method; fails with
/// NotInvertibleHere where the Jacobian Q + P (grad u)^T is singular.
inline SolutionSample act_numeric(const NumericGroupElement& g, const SolutionSample& s) {
  if (g.n != s.n) throw Error("group element and solution have different dimensions");
  const int n = g.n;
  Matrix<Real> q = g.q();
  RealVector p = g.p();
  RealVector dv = g.d_row();
  RealVector r = g.r();
  Real c = g.c();
  Real dd = g.d();

  auto jacobian = [=](const RealVector& x) {
    Matrix<Real> jac = q;
    RealVector gu = detail::gradient(s, x);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) jac(i, j) += p[i] * gu[j];
    }
    return jac;
  };
  {
    RealVector y;
    RealVector zero(n, Real(0));
    if (!detail::real_solve(jacobian(s.center), zero, y)) {
      throw NotInvertibleHere("point map is not invertible at the domain center");
    }
  }
  auto forward = [=](const RealVector& x) {
    Real ux = s(x);
    RealVector xt(n);
    for (int i = 0; i < n; ++i) {
      Real acc = r[i] + p[i] * ux;
      for (int j = 0; j < n; ++j) acc += q(i, j) * x[j];
      xt[i] = acc;
    }
    return std::make_pair(xt, ux);
  };
  const RealVector start = s.center;
  auto fn = [=](const RealVector& xt) -> Real {
    RealVector x = start;
    const Real tol = std::numeric_limits<Real>::epsilon() * Real(1e6);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      auto [img, ux] = forward(x);
      RealVector res(n);
      Real size = 0;
      for (int i = 0; i < n; ++i) {
        res[i] = xt[i] - img[i];
        size = std::max(size, Real(abs(res[i])));
      }
      if (size < tol) {
        converged = true;
        break;
      }
      RealVector step;
      if (!detail::real_solve(jacobian(x), res, step)) throw NotInvertibleHere("singular Jacobian during inversion");
      for (int i = 0; i < n; ++i) x[i] += step[i];
    }
    if (!converged) {
      auto [img, ux] = forward(x);
      Real size = 0;
      for (int i = 0; i < n; ++i) size = std::max(size, Real(abs(xt[i] - img[i])));
      if (size > Real("1e-12")) throw NotInvertibleHere("point-map inversion did not converge");
    }
    Real ux = s(x);
    Real out = c * ux + dd;
    for (int i = 0; i < n; ++i) out += dv[i] * x[i];
    return out;
  };

  auto [center_img, cu] = forward(s.center);
  (void)cu;
  Real qnorm = 0;
  for (int i = 0; i < n; ++i) {
    Real row = abs(p[i]);
    for (int j = 0; j < n; ++j) row += abs(q(i, j));
    qnorm = std::max(qnorm, row);
  }
  SolutionSample t =
      SolutionSample::callable(n, fn, center_img, s.radius * std::min(Real(1), qnorm) / Real(2), "transformed " + s.description);
  t.local = g.has_p() || s.local;
  return t;
}

/// Exact polynomial output when possible, the numeric action otherwise.
inline SolutionSample act(const GroupElement& g, const SolutionSample& s) {
  if (!g.has_p() && s.is_polynomial()) return act_exact(g, s);
  return act_numeric(to_numeric(g), s);
}

}  // namespace liesym
