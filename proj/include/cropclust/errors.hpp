#pragma once

#include <stdexcept>
#include <string>

namespace cropclust {

// Base for every error raised by the library. The CLI maps any of these to a
// one-line diagnostic and a nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file structure (PLY header, config syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

// File body shorter than its header declares.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// Input values that violate a data invariant (non-finite coordinates,
// missing labels, too few points).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent algorithm parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition between library components (mismatched
// lengths, cyclic forest, empty core set).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace cropclust
