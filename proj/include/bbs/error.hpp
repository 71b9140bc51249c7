#pragma once

#include <stdexcept>
#include <string>

namespace bbs {

// Malformed or inconsistent external data (strings, JSON, parameter files).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

// The partition function (or the q-transform) diverges for the given parameters.
class DivergenceError : public PreconditionError {
 public:
  explicit DivergenceError(const std::string& what) : PreconditionError(what) {}
};

}  // namespace bbs
