#pragma once

#include <stdexcept>
#include <string>

namespace packmatch {

/// Malformed user input: bad parameters, unparsable files, invalid
/// distributions. Messages carry line numbers where a file is involved.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that would exceed a configured size ceiling.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// High-precision evaluation lost more accuracy than was requested.
class PrecisionAlarm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two computations that must agree did not.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace packmatch
