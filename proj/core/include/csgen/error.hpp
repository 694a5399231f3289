#pragma once

#include <stdexcept>
#include <string>

namespace csgen {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (names the first violated constraint).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (datasets, word lists, run files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The annealing search ran out of live candidates.
class AnnealError : public Error {
 public:
  using Error::Error;
};

/// Re-ranking preconditions violated (empty or unscored pool, no opponents).
class TournamentError : public Error {
 public:
  using Error::Error;
};

}  // namespace csgen
