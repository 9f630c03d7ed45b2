#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/matrix.hpp"
#include "liesym/polynomial.hpp"
#include "liesym/rational.hpp"

namespace liesym {

/// 50 decimal digits; used wherever a transcendental value or a numerical
/// inversion is unavoidable.
using Real = boost::multiprecision::cpp_bin_float_50;
using RealVector = std::vector<Real>;

inline Real to_real(const Rational& q) {
  if (q.is_integer()) return Real(q.numerator().get_str());
  return Real(q.numerator().get_str()) / Real(q.denominator().get_str());
}

inline std::string real_str(const Real& r, int digits = 17) { return r.str(digits, std::ios_base::scientific); }

/// A candidate solution u(x): an exact polynomial in the Coord atoms, or a
/// thread-safe callable evaluated in Real.
struct SolutionSample {
  enum class Kind { Polynomial, Callable };

  int n = 1;
  Kind kind = Kind::Polynomial;
  Polynomial poly;
  std::function<Real(const RealVector&)> fn;
  RealVector center;
  Real radius = 1;
  bool local = false;
  std::string description;

  bool is_polynomial() const { return kind == Kind::Polynomial; }

  Real operator()(const RealVector& x) const {
    if (kind == Kind::Callable) return fn(x);
    return evaluate_with<Real>(
        poly, [&](Atom a) -> Real { return a.is(Atom::Kind::Coord) ? x.at(a.coord_index() - 1) : Real(0); },
        [](const Rational& c) { return to_real(c); }, Real(0));
  }

  static SolutionSample polynomial(int n, Polynomial p, std::string description) {
    for (Atom a : p.atoms()) {
      if (!a.is(Atom::Kind::Coord) || a.coord_index() > n) throw BadParams("solution polynomial may use x1..xN only");
    }
    SolutionSample s;
    s.n = n;
    s.kind = Kind::Polynomial;
    s.poly = std::move(p);
    s.center.assign(n, Real(0));
    s.description = std::move(description);
    return s;
  }

  static SolutionSample callable(int n, std::function<Real(const RealVector&)> f, RealVector center, Real radius,
                                 std::string description) {
    SolutionSample s;
    s.n = n;
    s.kind = Kind::Callable;
    s.fn = std::move(f);
    s.center = std::move(center);
    s.radius = radius;
    s.description = std::move(description);
    return s;
  }
};

/// x.M.x/2 + l.x + c; M must be symmetric positive definite, and have
/// determinant 1 when `unit_det` is set.
inline SolutionSample quadratic_solution(const RationalMatrix& m, const std::vector<Rational>& l = {},
                                         const Rational& c = Rational(0), bool unit_det = false) {
  const int n = static_cast<int>(m.rows());
  if (!m.is_square() || n < 1 || !m.is_symmetric()) throw BadParams("quadratic needs a symmetric square matrix");
  if (!l.empty() && static_cast<int>(l.size()) != n) throw BadParams("linear part has the wrong length");
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    RationalMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
    }
    if (sym_det(sub).sign() <= 0) throw BadParams("quadratic matrix is not positive definite");
  }
  if (unit_det && !sym_det(m).is_one()) throw BadParams("quadratic matrix does not have determinant 1");
  PolyBuilder b;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (!m(i - 1, j - 1).is_zero()) b.add(Monomial(Atom::coord(i)).times(Atom::coord(j)), m(i - 1, j - 1) / Rational(2));
    }
    if (!l.empty() && !l[i - 1].is_zero()) b.add(Monomial(Atom::coord(i)), l[i - 1]);
  }
  if (!c.is_zero()) b.add(Monomial(), c);
  return SolutionSample::polynomial(n, b.build(), "quadratic");
}

/// |x|^2 / 2
inline SolutionSample paraboloid(int n) {
  SolutionSample s = quadratic_solution(RationalMatrix::identity(n), {}, Rational(0), true);
  s.description = "paraboloid";
  return s;
}

/// N = 1 solutions of the affine maximal type equation with
/// u'' = (a + b x)^(-1/theta), theta in {1/2, 1, 1/3}, around x = 0.
inline SolutionSample am_one_dim_family(const Rational& theta, const Rational& a, const Rational& b) {
  if (a.sign() <= 0) throw BadParams("need a > 0 so that a + b x > 0 near x = 0");
  const bool half = theta == Rational(1, 2);
  const bool one = theta == Rational(1);
  const bool third = theta == Rational(1, 3);
  if (!half && !one && !third) throw BadParams("closed form available for theta = 1/2, 1, 1/3 only");
  const std::string desc = "am1d(theta=" + theta.str() + ", a=" + a.str() + ", b=" + b.str() + ")";
  if (b.is_zero()) {
    // u = a^(-1/theta) x^2 / 2
    Rational k = half ? pow(a, 2).inverse() : one ? a.inverse() : pow(a, 3).inverse();
    SolutionSample s = SolutionSample::polynomial(1, Polynomial::x(1) * Polynomial::x(1) * (k / Rational(2)), desc);
    return s;
  }
  Real ar = to_real(a);
  Real br = to_real(b);
  Real radius = ar / (Real(2) * abs(br));
  std::function<Real(const RealVector&)> f;
  if (half) {
    f = [ar, br](const RealVector& x) {
      Real t = ar + br * x[0];
      if (t <= 0) throw NotInvertibleHere("a + b x must stay positive");
      return -log(t) / (br * br);
    };
  } else if (one) {
    f = [ar, br](const RealVector& x) {
      Real t = ar + br * x[0];
      if (t <= 0) throw NotInvertibleHere("a + b x must stay positive");
      return (t * log(t) - t) / (br * br);
    };
  } else {
    f = [ar, br](const RealVector& x) {
      Real t = ar + br * x[0];
      if (t <= 0) throw NotInvertibleHere("a + b x must stay positive");
      return Real(1) / (Real(2) * br * br * t);
    };
  }
  return SolutionSample::callable(1, std::move(f), RealVector{Real(0)}, radius, desc);
}

}  // namespace liesym
