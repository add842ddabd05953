#pragma once
// Typed failures shared across the library. Anything that would blow a
// resource budget reports the size it needed instead of dying midway.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace canon {

// Raised before starting work whose cost exceeds the caller's cap, and by
// enumerations that hit the cap mid-flight. `required` is the predicted or
// partially-counted cost in abstract work units, `allowed` the cap.
class SizeError : public std::runtime_error {
 public:
  SizeError(std::string what, std::string required, std::uint64_t allowed)
      : std::runtime_error(what + " (requires " + required + " work units, cap " +
                           std::to_string(allowed) + ")"),
        required_(std::move(required)),
        allowed_(allowed) {}

  const std::string& required() const { return required_; }
  std::uint64_t allowed() const { return allowed_; }

 private:
  std::string required_;  // decimal; may exceed 64 bits
  std::uint64_t allowed_;
};

// Malformed persisted colorings, with 1-based position for CSV and a byte
// offset-derived position for JSON.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, std::size_t line, std::size_t col)
      : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

}  // namespace canon
