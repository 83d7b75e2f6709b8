#pragma once

#include <stdexcept>
#include <string>

namespace netkit {

// Base of everything the library throws. Subclasses let callers (the CLI in
// particular) tell bad input apart from states that fail physical checks.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidModulation : public DomainError {
 public:
  using DomainError::DomainError;
};

class SplitError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnphysicalState : public Error {
 public:
  using Error::Error;
};

}  // namespace netkit
