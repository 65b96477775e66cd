#pragma once

#include <stdexcept>
#include <string>

namespace uaq {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid input (documents, ids, families).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The instance lies outside the (alpha, beta)-restricted class.
class ClassError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Checked integer arithmetic would have wrapped.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An enumeration exceeded its configured cap.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace uaq
