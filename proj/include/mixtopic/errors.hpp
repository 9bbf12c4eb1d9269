#pragma once

#include <stdexcept>
#include <string>

namespace mixtopic {

// Malformed input text (bad field count, non-numeric token, ...).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally inconsistent schema (non-contiguous ids, two lab types, ...).
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input that violates a contract (out-of-range id, bad config).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite intermediate inside an inference sweep.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// File cannot be opened/read/written.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mixtopic
