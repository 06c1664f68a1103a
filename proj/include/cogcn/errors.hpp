#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cogcn {

/// Malformed input document (bad JSON, wrong types, unknown keys).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that breaks a semantic rule, e.g. an unknown class name.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every class was removed by pruning, or the input had none to begin with.
class EmptyGraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A loss evaluated to NaN or infinity during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string phase, std::size_t iteration)
      : std::runtime_error("non-finite loss during " + phase + " at iteration " +
                           std::to_string(iteration)),
        phase_(std::move(phase)),
        iteration_(iteration) {}

  const std::string& phase() const { return phase_; }
  std::size_t iteration() const { return iteration_; }

 private:
  std::string phase_;
  std::size_t iteration_;
};

}  // namespace cogcn
