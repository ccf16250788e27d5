#pragma once

#include <stdexcept>
#include <string>

namespace colorlit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid input data (bad rows, out-of-range
/// values, violated preconditions on user-supplied values).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Not enough usable samples to compute a statistic.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Filesystem failures. The message always carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Network retrieval failed on every attempted URL.
class FetchError : public IoError {
 public:
  using IoError::IoError;
};

/// Bad command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace colorlit
