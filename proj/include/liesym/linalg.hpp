#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "liesym/matrix.hpp"
#include "liesym/rational.hpp"

namespace liesym {

using RationalVector = std::vector<Rational>;

struct NullspaceResult {
  std::size_t dimension = 0;
  /// Basis in reduced column echelon order: basis vector k has a 1 at free
  /// column free_columns[k] and zeros at the other free columns.
  std::vector<RationalVector> basis;
  std::vector<std::size_t> pivot_columns;
  std::vector<std::size_t> free_columns;
};

namespace detail {

// Row scaled to integers by the lcm of its denominators.
inline std::vector<mpz_class> integer_row(const RationalMatrix& m, std::size_t i) {
  mpz_class l = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!m(i, j).is_integer()) {
      mpz_class d = m(i, j).denominator();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
  }
  std::vector<mpz_class> row(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    mpq_class q = m(i, j).to_mpq();
    row[j] = q.get_num() * (l / q.get_den());
  }
  return row;
}

}  // namespace detail

/// Exact nullspace by fraction-free (Bareiss) elimination followed by
/// back-substitution over the rationals.
inline NullspaceResult nullspace(const RationalMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<mpz_class>> a;
  a.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) a.push_back(detail::integer_row(m, i));

  NullspaceResult res;
  mpz_class prev = 1;
  std::size_t k = 0;
  for (std::size_t j = 0; j < cols && k < rows; ++j) {
    std::size_t piv = k;
    while (piv < rows && a[piv][j] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[k]);
    for (std::size_t i = k + 1; i < rows; ++i) {
      for (std::size_t l = j + 1; l < cols; ++l) {
        a[i][l] = a[k][j] * a[i][l] - a[i][j] * a[k][l];
        mpz_divexact(a[i][l].get_mpz_t(), a[i][l].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][j] = 0;
    }
    prev = a[k][j];
    res.pivot_columns.push_back(j);
    ++k;
  }

  std::vector<bool> is_pivot(cols, false);
  for (auto p : res.pivot_columns) is_pivot[p] = true;
  for (std::size_t j = 0; j < cols; ++j) {
    if (!is_pivot[j]) res.free_columns.push_back(j);
  }
  res.dimension = res.free_columns.size();

  for (std::size_t f : res.free_columns) {
    RationalVector x(cols, Rational(0));
    x[f] = Rational(1);
    for (std::size_t r = res.pivot_columns.size(); r-- > 0;) {
      std::size_t p = res.pivot_columns[r];
      mpq_class acc = 0;
      for (std::size_t l = p + 1; l < cols; ++l) {
        if (a[r][l] != 0 && !x[l].is_zero()) acc += mpq_class(a[r][l]) * x[l].to_mpq();
      }
      x[p] = Rational(mpq_class(-acc / mpq_class(a[r][p])));
    }
    res.basis.push_back(std::move(x));
  }
  return res;
}

inline std::size_t rank(const RationalMatrix& m) { return m.cols() - nullspace(m).dimension; }

/// Incrementally maintained reduced row echelon form over the rationals.
/// Rows that are linear combinations of the rows already held are dropped.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<RationalVector>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Reduces v against the held rows in place; returns true if v became zero.
  bool reduce(RationalVector& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& f = v[pivots_[r]];
      if (f.is_zero()) continue;
      Rational scale = f;
      const RationalVector& row = rows_[r];
      for (std::size_t j = pivots_[r]; j < cols_; ++j) {
        if (!row[j].is_zero()) v[j] -= scale * row[j];
      }
    }
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
  }

  /// Adds a row; returns true when it increased the rank.
  bool add(RationalVector v) {
    if (reduce(v)) return false;
    std::size_t p = 0;
    while (v[p].is_zero()) ++p;
    Rational inv = v[p].inverse();
    for (std::size_t j = p; j < cols_; ++j) {
      if (!v[j].is_zero()) v[j] *= inv;
    }
    for (auto& row : rows_) {
      if (row[p].is_zero()) continue;
      Rational f = row[p];
      for (std::size_t j = p; j < cols_; ++j) {
        if (!v[j].is_zero()) row[j] -= f * v[j];
      }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  RationalMatrix matrix() const {
    RationalMatrix m(rows_.size(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = rows_[i][j];
    }
    return m;
  }

 private:
  std::size_t cols_;
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Exact solution of A x = b if one exists (a particular solution with free
/// variables set to zero).
inline std::optional<RationalVector> solve_linear(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.cols();
  RowEchelon ech(n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    RationalVector row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
    row[n] = b[i];
    ech.add(std::move(row));
  }
  RationalVector x(n, Rational(0));
  for (std::size_t r = 0; r < ech.rank(); ++r) {
    std::size_t p = ech.pivots()[r];
    if (p == n) return std::nullopt;
    x[p] = ech.rows()[r][n];
  }
  return x;
}

}  // namespace liesym
