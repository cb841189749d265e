#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, bad parameters, unknown names.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Byte range of a node in the expression source.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset, std::vector<std::string> expected = {})
      : InputError(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// A point fell outside the domain of a space or a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit log/sqrt of a negative number, a zero divisor, or a
/// non-finite intermediate value.
class EvalDomainError : public Error {
 public:
  EvalDomainError(const std::string& what, Span span) : Error(what), span_(span) {}
  Span span() const noexcept { return span_; }

 private:
  Span span_;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double sigma_min) : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold (non-rectifiable path,
/// degenerate geometry, unvalidated weight).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace liftkit
