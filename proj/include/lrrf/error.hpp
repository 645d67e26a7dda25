#pragma once

#include <stdexcept>
#include <string>

namespace lrrf {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad ranking strings, dimension mismatches,
// unreadable files, arguments outside their documented range.
class InputError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed. Indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrrf
