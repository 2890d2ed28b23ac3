#pragma once

#include <stdexcept>
#include <string>

namespace mimocap {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A factorization or iterative kernel failed on its input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

// Repeated rank-deficient draws from a channel distribution.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

// Ideal transceivers (kappa = 0) have no finite capacity limit.
class UnboundedCapacity : public Error {
 public:
  using Error::Error;
};

class DegenerateRatio : public Error {
 public:
  using Error::Error;
};

// Some distortion variance is zero, so the high-SNR limit is undefined.
class SingularDistortion : public Error {
 public:
  using Error::Error;
};

}  // namespace mimocap
