#pragma once

#include <stdexcept>
#include <string>

namespace canonproc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is out of its documented range. The message names the field.
class ParameterError : public Error {
 public:
  ParameterError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A value violates a type invariant (dimension mismatch, duplicates, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A document could not be parsed. `location` is "line N" for syntax errors
/// or a field path such as "points[3][0]" for schema errors.
class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& what)
      : Error(location + ": " + what), location_(location) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// An exact computation would exceed its enumeration budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace canonproc
