#pragma once

#include <stdexcept>
#include <string>

namespace liesym {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingAtom : public Error {
 public:
  using Error::Error;
};

class NonSquare : public Error {
 public:
  NonSquare() : Error("matrix is not square") {}
};

class DivisorZero : public Error {
 public:
  DivisorZero() : Error("division by the zero polynomial") {}
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class OrderTooLow : public Error {
 public:
  using Error::Error;
};

class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

class NotAffine : public Error {
 public:
  using Error::Error;
};

class DetNotOne : public Error {
 public:
  using Error::Error;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class PNotAllowed : public Error {
 public:
  using Error::Error;
};

class NotInvertibleHere : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class JetInCoefficient : public Error {
 public:
  using Error::Error;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& kind, const std::string& msg, int line, int column)
      : Error(kind + " at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        kind_(kind),
        line_(line),
        column_(column) {}

  const std::string& kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string kind_;
  int line_;
  int column_;
};

}  // namespace liesym
