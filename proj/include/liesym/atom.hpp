#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "liesym/errors.hpp"

namespace liesym {

/// Largest supported number of independent variables.
inline constexpr int kMaxDim = 8;
/// Largest multiplicity of a single index inside a multi-index.
inline constexpr int kMaxIndexCount = 63;

/// Sorted list of indices in 1..N, e.g. (1,1,2) for the derivative d^3/dx1 dx1 dx2.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> indices) : idx_(indices) { normalize(); }
  explicit MultiIndex(std::vector<int> indices) : idx_(std::move(indices)) { normalize(); }

  int order() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  const std::vector<int>& indices() const { return idx_; }
  int operator[](std::size_t k) const { return idx_[k]; }

  MultiIndex with(int i) const {
    MultiIndex r = *this;
    r.idx_.insert(std::upper_bound(r.idx_.begin(), r.idx_.end(), i), i);
    check(i);
    return r;
  }

  /// Number of occurrences of index i.
  int count(int i) const { return static_cast<int>(std::count(idx_.begin(), idx_.end(), i)); }

  /// Number of distinct orderings of the underlying tuple.
  std::uint64_t orderings() const {
    std::uint64_t r = 1;
    int n = 0;
    int run = 0;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      ++n;
      run = (k > 0 && idx_[k] == idx_[k - 1]) ? run + 1 : 1;
      r = r * static_cast<std::uint64_t>(n) / static_cast<std::uint64_t>(run);
    }
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.idx_ == b.idx_; }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return a.idx_ != b.idx_; }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.idx_.size() != b.idx_.size()) return a.idx_.size() < b.idx_.size();
    return a.idx_ < b.idx_;
  }

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(idx_[k]);
    }
    return s;
  }

 private:
  static void check(int i) {
    if (i < 1 || i > kMaxDim) throw Error("index " + std::to_string(i) + " outside 1.." + std::to_string(kMaxDim));
  }
  void normalize() {
    for (int i : idx_) check(i);
    std::sort(idx_.begin(), idx_.end());
  }

  std::vector<int> idx_;
};

/// Enumerates all sorted multi-indices over 1..n of exactly the given order.
inline std::vector<MultiIndex> multi_indices(int n, int order) {
  std::vector<MultiIndex> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == order) {
      out.emplace_back(cur);
      return;
    }
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

/// Unknown-function identifier: 0 is phi, s in 1..N is xi^s.
using FuncId = int;
inline constexpr FuncId kPhi = 0;

/// One coordinate symbol of the polynomial ring, packed into 64 bits.
///
/// Layout: bits 60..62 kind; Coord keeps its index in bits 0..7; Jet and
/// FuncPartial keep per-index multiplicities (6 bits each, index i at bit
/// 6*(i-1)); FuncPartial adds the u-derivative count at bits 48..53 and the
/// function id at bits 54..57. The key order is the atom total order.
class Atom {
 public:
  enum class Kind : std::uint8_t { Theta = 0, Coord = 1, Dep = 2, Jet = 3, FuncPartial = 4 };

  Atom() = default;

  static Atom theta() { return Atom(pack_kind(Kind::Theta)); }
  static Atom coord(int i) {
    if (i < 1 || i > kMaxDim) throw Error("coordinate index out of range: " + std::to_string(i));
    return Atom(pack_kind(Kind::Coord) | static_cast<std::uint64_t>(i));
  }
  static Atom dep() { return Atom(pack_kind(Kind::Dep)); }
  static Atom jet(const MultiIndex& j) {
    if (j.empty()) return dep();
    return Atom(pack_kind(Kind::Jet) | pack_counts(j));
  }
  static Atom func_partial(FuncId f, const MultiIndex& a, int ucount) {
    if (f < 0 || f > kMaxDim) throw Error("function id out of range");
    if (ucount < 0 || ucount > kMaxIndexCount) throw Error("u-derivative count out of range");
    return Atom(pack_kind(Kind::FuncPartial) | pack_counts(a) | (static_cast<std::uint64_t>(ucount) << 48) |
                (static_cast<std::uint64_t>(f) << 54));
  }

  Kind kind() const { return static_cast<Kind>((key_ >> 60) & 0x7U); }
  bool is(Kind k) const { return kind() == k; }
  std::uint64_t key() const { return key_; }

  int coord_index() const { return static_cast<int>(key_ & 0xFFU); }
  FuncId func() const { return static_cast<FuncId>((key_ >> 54) & 0xFU); }
  int ucount() const { return static_cast<int>((key_ >> 48) & 0x3FU); }

  /// Multiplicity of index i in a Jet or FuncPartial atom.
  int index_count(int i) const { return static_cast<int>((key_ >> (6 * (i - 1))) & 0x3FU); }

  MultiIndex multi_index() const {
    std::vector<int> idx;
    for (int i = 1; i <= kMaxDim; ++i) {
      for (int c = index_count(i); c > 0; --c) idx.push_back(i);
    }
    return MultiIndex(std::move(idx));
  }

  /// Jet order |J|, or total derivative order |a|+b of a FuncPartial.
  int order() const {
    switch (kind()) {
      case Kind::Jet:
        return x_order();
      case Kind::FuncPartial:
        return x_order() + ucount();
      default:
        return 0;
    }
  }
  int x_order() const {
    int n = 0;
    for (int i = 1; i <= kMaxDim; ++i) n += index_count(i);
    return n;
  }

  /// Appends index i to the x multi-index of a Jet or FuncPartial atom.
  Atom with_index(int i) const {
    if (index_count(i) >= kMaxIndexCount) throw Error("multi-index multiplicity overflow");
    return Atom(key_ + (std::uint64_t{1} << (6 * (i - 1))));
  }
  Atom with_extra_u() const {
    if (ucount() >= kMaxIndexCount) throw Error("u-derivative count overflow");
    return Atom(key_ + (std::uint64_t{1} << 48));
  }

  /// Largest index mentioned (coordinate index or largest multi-index entry).
  int max_index() const {
    if (is(Kind::Coord)) return coord_index();
    int m = 0;
    if (is(Kind::Jet) || is(Kind::FuncPartial)) {
      for (int i = 1; i <= kMaxDim; ++i) {
        if (index_count(i) > 0) m = i;
      }
      if (is(Kind::FuncPartial)) m = std::max(m, func());
    }
    return m;
  }

  std::string str() const {
    switch (kind()) {
      case Kind::Theta:
        return "theta";
      case Kind::Coord:
        return "x" + std::to_string(coord_index());
      case Kind::Dep:
        return "u";
      case Kind::Jet:
        return "u[" + multi_index().str() + "]";
      case Kind::FuncPartial: {
        std::string s = func() == kPhi ? "phi" : "xi" + std::to_string(func());
        if (order() == 0) return s;
        s += "_";
        const MultiIndex j = multi_index();
        for (int i : j.indices()) s += "x" + std::to_string(i);
        for (int k = 0; k < ucount(); ++k) s += "u";
        return s;
      }
    }
    return "?";
  }

  friend bool operator==(Atom a, Atom b) { return a.key_ == b.key_; }
  friend bool operator!=(Atom a, Atom b) { return a.key_ != b.key_; }
  friend bool operator<(Atom a, Atom b) { return a.key_ < b.key_; }
  friend bool operator>(Atom a, Atom b) { return a.key_ > b.key_; }

  friend std::ostream& operator<<(std::ostream& os, Atom a) { return os << a.str(); }

 private:
  explicit Atom(std::uint64_t key) : key_(key) {}

  static std::uint64_t pack_kind(Kind k) { return static_cast<std::uint64_t>(k) << 60; }
  static std::uint64_t pack_counts(const MultiIndex& j) {
    std::uint64_t bits = 0;
    for (int i : j.indices()) {
      std::uint64_t field = (bits >> (6 * (i - 1))) & 0x3FU;
      if (field >= kMaxIndexCount) throw Error("multi-index multiplicity overflow");
      bits += std::uint64_t{1} << (6 * (i - 1));
    }
    return bits;
  }

  std::uint64_t key_ = 0;
};

}  // namespace liesym

template <>
struct std::hash<liesym::Atom> {
  std::size_t operator()(liesym::Atom a) const { return std::hash<std::uint64_t>{}(a.key() * 0x9E3779B97F4A7C15ULL); }
};
