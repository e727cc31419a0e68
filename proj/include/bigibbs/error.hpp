#pragma once

#include <stdexcept>
#include <string>

namespace bigibbs {

// Base of every error the library raises. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A point was appended to a configuration that already contains it.
class DuplicatePoint : public Error {
public:
  using Error::Error;
};

// A point at which a density is evaluated coincides with a configuration point.
class CoincidentPoint : public Error {
public:
  using Error::Error;
};

class InfeasibleBoundary : public Error {
public:
  using Error::Error;
};

class NotNonnegativeModel : public Error {
public:
  using Error::Error;
};

class WrongArity : public Error {
public:
  using Error::Error;
};

class SubwindowNotContained : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Two algebraically equal density factorizations disagreed beyond tolerance.
class IdentityViolation : public Error {
public:
  using Error::Error;
};

} // namespace bigibbs
