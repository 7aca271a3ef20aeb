// Copyright 2026 The tsgdm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tsgdm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument fell outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class EmptyBatchError : public Error {
 public:
  using Error::Error;
};

class EmptyHistoryError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

// Malformed record in a line-delimited input file. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LabelError : public Error {
 public:
  LabelError(std::size_t line, const std::string& label)
      : Error("line " + std::to_string(line) + ": label '" + label + "' not in label set"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration value. `field()` is a dotted path such as "run.generation.alpha".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnknownFieldError : public ConfigError {
 public:
  explicit UnknownFieldError(std::string field) : ConfigError(std::move(field), "unknown field") {}
};

// Gateway failures. Everything the language-model layer throws derives from this.
class GatewayError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class AuthError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class ProtocolError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class CacheMissError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class BudgetExceededError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace tsgdm
