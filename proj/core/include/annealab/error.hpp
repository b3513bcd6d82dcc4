#pragma once

#include <stdexcept>
#include <string>

namespace annealab {

// Base for every library failure that a caller may want to map to an exit
// status. Domain violations (s outside [0,1], bad parameters) use the
// standard std::domain_error / std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model or experiment configuration. The message names the
// offending entry.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Integration stability guard tripped, NaN detected, or an exponent left the
// representable range.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A spectral quantity needed a gap that is below the degeneracy floor.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace annealab
