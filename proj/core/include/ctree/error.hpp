#pragma once

#include <stdexcept>
#include <string>

namespace ctree {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument or parameter combination outside its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, point sets, trees).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctree
