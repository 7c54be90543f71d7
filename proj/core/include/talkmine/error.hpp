#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace talkmine {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown keys, out-of-range values, missing files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be processed (malformed transcripts, empty corpora).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A transcript line that does not follow the turn format.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A structurally invalid transcript (e.g. a repeated @session header).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace talkmine
