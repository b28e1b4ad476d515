#pragma once

#include <stdexcept>
#include <string>

namespace fracmax {

/// Raised for every rejected input: bad parameters, malformed files,
/// invalid spaces. The message names the offending value.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem-check configuration violates the hypotheses of the result it
/// is meant to exercise.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracmax
