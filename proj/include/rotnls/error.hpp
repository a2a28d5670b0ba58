#pragma once

#include <stdexcept>
#include <string>

namespace rotnls {

enum class ErrorCode {
  invalid_dimension,
  non_power_of_two,
  non_positive_box,
  zero_field,
  rotation_exceeds_trap,
  unresolved_field,
  too_few_samples,
  unsupported_rotation_axis,
  non_confining_trap,
  no_convergence,
  parse_error,
  validation_error,
  io_error,
  bad_magic,
  version_mismatch,
  size_mismatch,
  unknown_column,
  invalid_argument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string reason)
      : Error(ErrorCode::validation_error, field + ": " + reason),
        field_(std::move(field)),
        reason_(std::move(reason)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

}  // namespace rotnls
