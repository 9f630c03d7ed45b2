#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "liesym/atom.hpp"
#include "liesym/errors.hpp"
#include "liesym/jet.hpp"
#include "liesym/polynomial.hpp"

namespace liesym {

/// Expression language:
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' integer)?
///   primary := integer | integer '/' integer | x<i> | u | u[i,j,...] | theta | '(' expr ')'
/// Vector fields are `name = expr` statements (names xi1..xiN and phi)
/// separated by ';' or newlines; '#' starts a comment.
namespace parse_detail {

struct Token {
  enum class Kind { Int, Ident, Symbol, Newline, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (ch == '\n') {
        out.push_back({Token::Kind::Newline, "\n", line_, col_});
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
        continue;
      }
      Token t{Token::Kind::End, "", line_, col_};
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        t.kind = Token::Kind::Int;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
          throw ParseError("SyntaxError", "decimal numbers are not supported; use p/q", line_, col_);
        }
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        t.kind = Token::Kind::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::string("+-*/^()[],;=").find(ch) != std::string::npos) {
        t.kind = Token::Kind::Symbol;
        t.text = std::string(1, advance());
      } else {
        throw ParseError("SyntaxError", std::string("unexpected character '") + ch + "'", line_, col_);
      }
      out.push_back(t);
    }
    out.push_back({Token::Kind::End, "", line_, col_});
    return out;
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, int n) : toks_(std::move(toks)), n_(n) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at_symbol(const char* s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& kind, const std::string& msg, const Token& t) const {
    throw ParseError(kind, msg, t.line, t.column);
  }
  void expect(const char* s) {
    if (!at_symbol(s)) fail("SyntaxError", std::string("expected '") + s + "'" + found(), peek());
    ++pos_;
  }
  std::string found() const {
    if (peek().kind == Token::Kind::End) return " but reached end of input";
    if (peek().kind == Token::Kind::Newline) return " but found end of line";
    return " but found '" + peek().text + "'";
  }
  void skip_newlines() {
    while (peek().kind == Token::Kind::Newline) ++pos_;
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (at_symbol("+") || at_symbol("-")) {
      bool minus = next().text == "-";
      Polynomial t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (true) {
      if (at_symbol("*")) {
        ++pos_;
        acc = acc * unary();
      } else if (at_symbol("/")) {
        fail("DivisionNotSupported", "division is only allowed inside rational literals p/q", peek());
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (at_symbol("-")) {
      ++pos_;
      return unary() * Rational(-1);
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (at_symbol("^")) {
      ++pos_;
      const Token& t = peek();
      if (t.kind != Token::Kind::Int) fail("SyntaxError", "exponent must be a non-negative integer" + found(), t);
      ++pos_;
      if (t.text.size() > 4) fail("SyntaxError", "exponent too large", t);
      return pow(base, static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  Polynomial primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      ++pos_;
      Rational v = Rational::parse(t.text);
      if (at_symbol("/")) {
        ++pos_;
        const Token& d = peek();
        if (d.kind != Token::Kind::Int) {
          fail("DivisionNotSupported", "division is only allowed inside rational literals p/q", d);
        }
        ++pos_;
        Rational den = Rational::parse(d.text);
        if (den.is_zero()) fail("SyntaxError", "zero denominator", d);
        v = v / den;
      }
      return Polynomial(v);
    }
    if (at_symbol("(")) {
      ++pos_;
      Polynomial e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      ++pos_;
      if (t.text == "theta") return Polynomial::theta();
      if (t.text == "u") {
        if (!at_symbol("[")) return Polynomial::u();
        ++pos_;
        std::vector<int> idx;
        while (true) {
          const Token& it = peek();
          if (it.kind != Token::Kind::Int) fail("SyntaxError", "expected a jet index" + found(), it);
          ++pos_;
          idx.push_back(index_value(it));
          if (at_symbol(",")) {
            ++pos_;
            continue;
          }
          expect("]");
          break;
        }
        if (static_cast<int>(idx.size()) > kMaxIndexCount) fail("SyntaxError", "jet order too large", t);
        return Polynomial::jet(MultiIndex(idx));
      }
      if (t.text.size() > 1 && t.text[0] == 'x' && all_digits(t.text.substr(1))) {
        Token it = t;
        it.text = t.text.substr(1);
        return Polynomial::x(index_value(it));
      }
      fail("SyntaxError", "unknown identifier '" + t.text + "'", t);
    }
    fail("SyntaxError", "expected an expression" + found(), t);
  }

  int index_value(const Token& t) const {
    int limit = n_ > 0 ? n_ : kMaxDim;
    if (t.text.size() > 3 || std::stoi(t.text) < 1 || std::stoi(t.text) > limit) {
      fail("IndexOutOfRange", "index " + t.text + " outside 1.." + std::to_string(limit), t);
    }
    return std::stoi(t.text);
  }

  static bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int n_;
};

}  // namespace parse_detail

/// Parses one expression; indices are checked against 1..n (n = 0: 1..8).
inline Polynomial parse_expression(const std::string& text, int n = 0) {
  parse_detail::Parser p(parse_detail::Lexer(text).run(), n);
  p.skip_newlines();
  Polynomial e = p.expr();
  p.skip_newlines();
  if (!p.at_end()) p.fail("SyntaxError", "unexpected trailing input" + p.found(), p.peek());
  return e;
}

/// Parses "xi1 = ...; ...; phi = ..." for dimension n. Missing coefficients
/// are zero; coefficients may use x1..xN and u only.
inline VectorField parse_vector_field(const std::string& text, int n) {
  if (n < 1 || n > kMaxDim) throw Error("dimension N must be between 1 and " + std::to_string(kMaxDim));
  parse_detail::Parser p(parse_detail::Lexer(text).run(), n);
  std::vector<std::optional<Polynomial>> coeff(n + 1);
  while (true) {
    while (p.peek().kind == parse_detail::Token::Kind::Newline || p.at_symbol(";")) p.next();
    if (p.at_end()) break;
    const auto name = p.peek();
    if (name.kind != parse_detail::Token::Kind::Ident) p.fail("SyntaxError", "expected xi<i> or phi" + p.found(), name);
    p.next();
    FuncId f = -1;
    if (name.text == "phi") {
      f = kPhi;
    } else if (name.text.size() > 2 && name.text.compare(0, 2, "xi") == 0 &&
               parse_detail::Parser::all_digits(name.text.substr(2))) {
      parse_detail::Token it = name;
      it.text = name.text.substr(2);
      f = p.index_value(it);
    } else {
      p.fail("SyntaxError", "unknown coefficient name '" + name.text + "'", name);
    }
    if (coeff[f]) p.fail("SyntaxError", "coefficient '" + name.text + "' assigned twice", name);
    p.expect("=");
    const auto start = p.peek();
    Polynomial e = p.expr();
    if (e.any_atom([](Atom a) { return !(a.is(Atom::Kind::Coord) || a.is(Atom::Kind::Dep)); })) {
      throw JetInCoefficient("coefficient " + name.text + " at " + std::to_string(start.line) + ":" +
                             std::to_string(start.column) + " may depend on x and u only");
    }
    coeff[f] = std::move(e);
    if (!(p.at_end() || p.at_symbol(";") || p.peek().kind == parse_detail::Token::Kind::Newline)) {
      p.fail("SyntaxError", "expected ';' or end of line" + p.found(), p.peek());
    }
  }
  std::vector<Polynomial> xi(n);
  for (int s = 1; s <= n; ++s) xi[s - 1] = coeff[s].value_or(Polynomial());
  return VectorField(n, std::move(xi), coeff[kPhi].value_or(Polynomial()));
}

}  // namespace liesym
