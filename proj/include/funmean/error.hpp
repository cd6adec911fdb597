#pragma once

#include <stdexcept>
#include <string>

namespace funmean {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A functional that would not be proper (empty domain, -inf values, too few finite nodes).
class ImproperFunction : public Error {
 public:
  using Error::Error;
};

// Sampled data is not convex beyond rounding tolerance.
class NotConvex : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace funmean
