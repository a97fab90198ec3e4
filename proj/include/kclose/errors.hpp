#pragma once

#include <stdexcept>
#include <string>

namespace kclose {

/// Invalid parameters: non-prime p, gcd(h,d) != 1, fields that are not m-close, ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation would need digits beyond the guaranteed precision of its inputs.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed the configured ceiling.
class CeilingExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed object violates a structural guarantee (non-monomial epsilon, ...).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kclose
