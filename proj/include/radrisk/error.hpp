#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radrisk {

/// Bad or unreadable input data. Maps to CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single malformed record in an input file; `record` is the 1-based row or
/// line number as counted in the file.
class RecordError : public DataError {
 public:
  RecordError(std::size_t record, const std::string& what)
      : DataError("record " + std::to_string(record) + ": " + what), record_(record) {}
  std::size_t record() const noexcept { return record_; }

 private:
  std::size_t record_;
};

/// A metric was requested for a user that has no tweets.
class UndefinedMetricError : public DataError {
 public:
  using DataError::DataError;
};

/// The input has no spread, so a density cannot be estimated.
class DegenerateDistributionError : public DataError {
 public:
  using DataError::DataError;
};

/// Invalid arguments or configuration. Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace radrisk
