#pragma once

#include <stdexcept>
#include <string>

namespace gbun {

/// Base for all library errors. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad flag combinations, unknown identifiers. Exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files, invalid labels, shape mismatches. Exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Unsolvable systems, non-finite values, contract violations. Exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Transport failures: timeouts, disconnects, socket errors. Exit code 4.
class NetworkError : public Error {
 public:
  using Error::Error;
};

/// Collective protocol violations (mismatched opcode/round/length).
class ProtocolError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

}  // namespace gbun
