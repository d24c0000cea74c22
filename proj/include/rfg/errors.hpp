#pragma once

#include <stdexcept>
#include <string>

namespace rfg {

/// Malformed or out-of-contract input (bad generator index, unparsable text, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured budget (catalog bound, ball radius, degree cap, ...) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical guarantee failed to hold; always a bug, never a user error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rfg
