#pragma once

#include <stdexcept>
#include <string>

namespace jtheta {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of the called operation (e.g. Im tau <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// The guard-bit budget or a sign probe could not be satisfied.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace jtheta
