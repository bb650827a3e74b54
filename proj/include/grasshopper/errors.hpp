#pragma once

#include <stdexcept>
#include <string>

namespace grasshopper {

// Invalid user input: bad arguments, malformed files, violated preconditions.
// The CLI maps these to exit code 2; anything else escaping is a runtime failure.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class GridNotAntipodal : public InputError {
 public:
  explicit GridNotAntipodal(std::size_t index)
      : InputError("grid not antipodal: point " + std::to_string(index) + " has no antipodal partner"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class AngleUnresolved : public InputError {
 public:
  using InputError::InputError;
};

class GridMismatch : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace grasshopper
