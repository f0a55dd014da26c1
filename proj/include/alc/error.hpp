#pragma once

#include <stdexcept>
#include <string>

namespace alc {

/// Precondition on an argument was violated (bad size, out-of-range value).
class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation exceeds a hard work or memory budget.
/// Thrown instead of silently truncating a search.
class resource_limit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range experiment configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alc
