#pragma once

#include <stdexcept>
#include <string>

namespace mdirac {

/// Bad user input: out-of-range index, malformed config, dimension mismatch.
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to converge (quadrature, ODE step underflow,
/// eigensolver breakdown). Carries the location where it happened when known.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant was violated (e.g. unit-determinant drift beyond
/// the allowed window). Indicates results cannot be trusted.
class InvariantError : public std::runtime_error {
  public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Expression evaluation hit a domain fault (sqrt/log of a negative number,
/// division by zero) at a concrete point.
class EvalDomainError : public std::runtime_error {
  public:
    explicit EvalDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error from the expression parser; keeps the byte offset and a
/// description of what was expected.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

} // namespace mdirac
