#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acmatch {

// Caller broke a documented precondition (bad start offset, zero workers,
// engine/automaton mismatch, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A pattern set could not be built. `index()` is the position of the
// offending pattern in the input list, or npos when the set as a whole is bad.
class PatternError : public std::invalid_argument {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  PatternError(const std::string& what, std::size_t index = npos)
      : std::invalid_argument(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed calibration, sweep or crossover document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace acmatch
