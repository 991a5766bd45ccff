#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qmix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-stochastic rows, out-of-range indices, bad parameters.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
  ValidationError(const std::string& what, std::vector<std::string> problems)
      : Error(what), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// A quantity is numerically too close to a singularity to be trusted.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Degenerate spectra or post-selection events of vanishing probability.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo step budget exhausted.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmix
