#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eqp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction precondition was violated (overlapping strips, a profile
/// leaking out of its strip, a nonzero-mean Poisson source, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A run was aborted because the state became non-finite.
class RuntimeAbort : public Error {
 public:
  RuntimeAbort(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace eqp
