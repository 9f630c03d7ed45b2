#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include "liesym/errors.hpp"

namespace liesym {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline;
/// anything larger is promoted to a GMP rational. The representation is
/// canonical: a value is big if and only if it does not fit inline, so two
/// equal values always share the same representation.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long value) : num_(value) { demote_min(); }  // NOLINT
  Rational(long long value) : num_(value) { demote_min(); }  // NOLINT

  Rational(std::int64_t num, std::int64_t den) { assign_small(num, den); }

  explicit Rational(const mpq_class& q) { assign_big(mpq_class(q)); }
  explicit Rational(const mpz_class& z) { assign_big(mpq_class(z)); }

  Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
    if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& other) {
    if (this != &other) {
      num_ = other.num_;
      den_ = other.den_;
      big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  /// Parses "p", "-p" or "p/q". Throws liesym::Error on malformed input.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error("empty rational literal");
    for (char c : s) {
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) {
        throw Error("malformed rational literal '" + s + "'");
      }
    }
    mpq_class q;
    if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) {
      throw Error("malformed rational literal '" + s + "'");
    }
    if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(q);
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  bool is_small() const { return !big_; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    set_mpz(q.get_num_mpz_t(), num_);
    set_mpz(q.get_den_mpz_t(), den_);
    return q;
  }
  mpz_class numerator() const { return to_mpq().get_num(); }
  mpz_class denominator() const { return to_mpq().get_den(); }

  /// Inline numerator/denominator; only meaningful when is_small().
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  double to_double() const { return big_ ? big_->get_d() : static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return Rational(mpq_class(-*big_));
  }

  Rational inverse() const {
    if (is_zero()) throw Error("inverse of zero");
    if (!big_) {
      Rational r;
      r.num_ = num_ < 0 ? -den_ : den_;
      r.den_ = num_ < 0 ? -num_ : num_;
      return r;
    }
    return Rational(mpq_class(1 / *big_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_wide(I128(a.num_) + b.num_, 1);
      return from_wide(I128(a.num_) * b.den_ + I128(b.num_) * a.den_, I128(a.den_) * b.den_);
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_wide(I128(a.num_) - b.num_, 1);
      return from_wide(I128(a.num_) * b.den_ - I128(b.num_) * a.den_, I128(a.den_) * b.den_);
    }
    return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_wide(I128(a.num_) * b.num_, 1);
      return from_wide(I128(a.num_) * b.num_, I128(a.den_) * b.den_);
    }
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return I128(a.num_) * b.den_ < I128(b.num_) * a.den_;
    return a.to_mpq() < b.to_mpq();
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::size_t hash() const {
    if (!big_) {
      auto h = static_cast<std::uint64_t>(num_) * 0x9E3779B97F4A7C15ULL;
      return static_cast<std::size_t>(h ^ (static_cast<std::uint64_t>(den_) + (h << 6) + (h >> 2)));
    }
    return std::hash<std::string>{}(big_->get_str());
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using I128 = __int128;
  using U128 = unsigned __int128;

  static constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

  static U128 gcd128(U128 a, U128 b) {
    while (b != 0) {
      U128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static void set_mpz(mpz_ptr z, std::int64_t v) {
    if (v >= std::numeric_limits<long>::min() && v <= std::numeric_limits<long>::max()) {
      mpz_set_si(z, static_cast<long>(v));
    } else {
      mpz_set_str(z, std::to_string(v).c_str(), 10);
    }
  }

  static mpz_class wide_to_mpz(I128 v) {
    bool neg = v < 0;
    U128 m = neg ? -static_cast<U128>(v) : static_cast<U128>(v);
    mpz_class hi(static_cast<unsigned long>(m >> 64));
    mpz_class lo(static_cast<unsigned long>(m & 0xFFFFFFFFFFFFFFFFULL));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
  }

  // num/den with den > 0, not necessarily reduced.
  static Rational from_wide(I128 num, I128 den) {
    Rational r;
    if (num == 0) return r;
    if (den != 1) {
      U128 g = gcd128(num < 0 ? -static_cast<U128>(num) : static_cast<U128>(num), static_cast<U128>(den));
      if (g != 1) {
        num /= static_cast<I128>(g);
        den /= static_cast<I128>(g);
      }
    }
    if (num >= -kMax && num <= kMax && den <= kMax) {
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    mpq_class q(wide_to_mpz(num), wide_to_mpz(den));
    r.big_ = std::make_unique<mpq_class>(std::move(q));
    return r;
  }

  void assign_small(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("zero denominator");
    if (den < 0) {
      *this = from_wide(-I128(num), -I128(den));
    } else {
      *this = from_wide(num, den);
    }
  }

  void demote_min() {
    if (num_ == std::numeric_limits<std::int64_t>::min()) {
      mpq_class q;
      set_mpz(q.get_num_mpz_t(), num_);
      num_ = 0;
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  void assign_big(mpq_class q) {
    q.canonicalize();
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 63 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 63 &&
        n.fits_slong_p() && d.fits_slong_p()) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace liesym

template <>
struct std::hash<liesym::Rational> {
  std::size_t operator()(const liesym::Rational& r) const { return r.hash(); }
};
