#pragma once

#include <stdexcept>
#include <string>

namespace nanophrase {

// Library-wide error type. Operations that report violations as data
// (validate) do not throw; everything else signals misuse or bad input
// through this.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the coefficient-stabilization policy exhausts its q cap
// without two consecutive stages agreeing. Carries both trailing values
// so the caller can report the disagreement.
class StabilizationError : public Error {
public:
  StabilizationError(int q_last, long long previous, long long last, const std::string& what)
      : Error(what), q_last(q_last), previous_value(previous), last_value(last) {}

  int q_last;
  long long previous_value;
  long long last_value;
};

}  // namespace nanophrase
