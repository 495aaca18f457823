#pragma once

#include <stdexcept>
#include <string>

namespace qoefis {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter violates a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A crisp value lies outside the universe of its variable.
class RangeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Malformed or inconsistent input data (CSV rows, model documents).
class DataError : public Error {
 public:
  using Error::Error;
};

// Required structure is missing, e.g. a CSV column or a JSON field.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// Every rule fired with strength zero: the inputs fall outside the
// induced knowledge base.
class NoRuleCoverage : public Error {
 public:
  NoRuleCoverage() : Error("no rule covers the given inputs") {}
  using Error::Error;
};

}  // namespace qoefis
