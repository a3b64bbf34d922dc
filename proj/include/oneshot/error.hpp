#pragma once

#include <stdexcept>
#include <string>

namespace oneshot {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input: bad distributions, mismatched sizes,
// matrices that are not unitary, schema violations in files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The request is well formed but exceeds a configured computational cap
// (composite dimension, copy count, trajectory space).
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace oneshot
