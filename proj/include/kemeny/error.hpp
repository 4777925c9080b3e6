#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kemeny {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed arguments: dimension mismatches, non-permutations, bad specs.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Instance too large for the requested algorithm (n! / 2^n guards).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Iterative method exhausted its budget; carries the last iterate so the
// caller can inspect how far it got.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last)
      : Error(what), last_iterate(std::move(last)) {}
  std::vector<double> last_iterate;
};

// Tensor shape incompatibility; the message names the primitive and shapes.
class InvalidShapeError : public Error {
 public:
  using Error::Error;
};

// An operation was called against inconsistent internal state (for example a
// decoder mask that disagrees with the KV cache length).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Checkpoint or model configuration does not match the request.
class ConfigMismatchError : public Error {
 public:
  using Error::Error;
};

// Parsing/ingestion failure; the message names the offending location.
class IngestError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Zero-variance differences: the paired t statistic is undefined.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

}  // namespace kemeny
