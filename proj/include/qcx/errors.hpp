#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcx {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Indeterminate form (0/0, inf-inf, 0*inf, ...) met during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A pole or vanishing denominator hit where the construction requires a
/// finite value (chain denominators, criterion functionals on a grid).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A map or parameter set violates the hypotheses of a construction.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcx
