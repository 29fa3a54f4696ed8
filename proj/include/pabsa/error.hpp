// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pabsa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file could not be parsed or violates a record invariant.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A polarity provider could not produce scores for an instance.
class ProviderError : public Error {
 public:
  using Error::Error;
};

/// Model file is truncated, corrupt or of an unsupported version.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

class ModelVersionError : public ModelFormatError {
 public:
  using ModelFormatError::ModelFormatError;
};

/// Error raised by an experiment stage, prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace pabsa
