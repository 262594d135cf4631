#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace radar {

// 1-based source position; line == 0 means "unknown".
struct SourcePos {
  uint32_t line = 0;
  uint32_t column = 0;

  bool known() const { return line != 0; }
};

std::string to_string(const SourcePos& pos);

// Root of the error hierarchy. `kind()` is a stable machine-greppable tag,
// `what()` the human message (without position; callers prepend file:line:col).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message, SourcePos pos = {})
      : std::runtime_error(message), kind_(std::move(kind)), pos_(pos) {}

  const std::string& kind() const { return kind_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string kind_;
  SourcePos pos_;
};

class LexError : public Error {
 public:
  LexError(const std::string& message, SourcePos pos)
      : Error("LexError", message, pos) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos,
             std::vector<std::string> expected = {})
      : Error("ParseError", message, pos), expected_(std::move(expected)) {}

  // Token spellings the parser would have accepted at the error position.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class SemanticError : public Error {
 public:
  SemanticError(const std::string& message, SourcePos pos = {})
      : Error("SemanticError", message, pos) {}

 protected:
  SemanticError(std::string kind, const std::string& message, SourcePos pos)
      : Error(std::move(kind), message, pos) {}
};

class InvalidDistributionError : public SemanticError {
 public:
  InvalidDistributionError(const std::string& message, SourcePos pos = {})
      : SemanticError("InvalidDistribution", message, pos) {}
};

class DesignSpaceOverflowError : public Error {
 public:
  DesignSpaceOverflowError(const std::string& message)
      : Error("DesignSpaceOverflow", message) {}
};

class NumericError : public Error {
 public:
  NumericError(const std::string& message, size_t solution_index,
               size_t run_index, SourcePos pos)
      : Error("NumericError", message, pos),
        solution_(solution_index),
        run_(run_index) {}

  size_t solution_index() const { return solution_; }
  size_t run_index() const { return run_; }

 private:
  size_t solution_ = 0;
  size_t run_ = 0;
};

class CapacityError : public Error {
 public:
  CapacityError(const std::string& message) : Error("CapacityError", message) {}
};

class LengthMismatchError : public Error {
 public:
  LengthMismatchError(const std::string& message)
      : Error("LengthMismatch", message) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& message) : Error("Timeout", message) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& message) : Error("IoError", message) {}
};

}  // namespace radar
