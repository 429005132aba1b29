#pragma once

#include <stdexcept>
#include <string>

namespace henon {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NotACycle : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// An exact rational conjugate does not exist (needs a (d-1)-th root outside Q).
class NoRationalConjugate : public Error {
 public:
  using Error::Error;
};

class UnsupportedNonConstantA : public Error {
 public:
  using Error::Error;
};

class DegreeUnsupported : public Error {
 public:
  using Error::Error;
};

class ZeroInput : public Error {
 public:
  using Error::Error;
};

// Raised when an iteration budget (step cap or coordinate size) is exhausted.
// Subclasses carry whatever partial result was available.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace henon
