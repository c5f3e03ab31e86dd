// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rbox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rectangle with nonpositive or nonfinite side, or nonfinite coordinate.
class InvalidRect : public Error {
 public:
  using Error::Error;
};

/// A count, threshold or ratio outside its allowed range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A regression delta that cannot be mapped back to a finite rectangle.
class InvalidDelta : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inputs that parse but are semantically inconsistent (orphan image ids,
/// missing targets, empty ground truth).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbox
