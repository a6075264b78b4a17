#pragma once

#include <stdexcept>
#include <string>

namespace rgls {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: TSPLIB documents, native instance files, regret CSVs.
class ParseError : public Error {
public:
  using Error::Error;
};

// A value violates a documented precondition (bad tour, bad argument).
class ValidationError : public Error {
public:
  using Error::Error;
};

// Exact solvers refuse instances above their size bound.
class CapacityError : public Error {
public:
  using Error::Error;
};

// A regret file or feature set does not match the instance it is used with.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

}  // namespace rgls
