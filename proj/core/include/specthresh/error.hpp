#pragma once

#include <stdexcept>
#include <string>

namespace specthresh {

// Base of every error raised by the library. The three subclasses map onto the
// CLI exit codes (2 usage, 3 input, 4 numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// External data (files, trajectories) is unreadable or misshapen.
class InputError : public Error {
 public:
  using Error::Error;
};

// A decomposition failed or produced non-finite output.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace specthresh
