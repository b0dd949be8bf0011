#pragma once

#include <stdexcept>
#include <string>

namespace kerrgauge {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory state is too close to the cos(theta~) = 0 singularity, or has
/// left the finite range of double arithmetic.
class GuardTripped : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Fock-basis truncation leaves more than the allowed probability tail.
class CutoffError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kerrgauge
