#pragma once

#include <stdexcept>
#include <string>

namespace oaf {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Alignment target direction (or funnel vector) has vanishing norm.
struct DegenerateDirection : Error {
  using Error::Error;
};

// 6D rotation input cannot be orthonormalized.
struct DegenerateInput : Error {
  using Error::Error;
};

struct ChunkLengthMismatch : Error {
  using Error::Error;
};

struct TooShort : Error {
  using Error::Error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct NotTrained : Error {
  using Error::Error;
};

struct SamplingExhausted : Error {
  using Error::Error;
};

struct InfeasibleScene : Error {
  using Error::Error;
};

struct FrameInitFailure : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatVersionMismatch : Error {
  using Error::Error;
};

// Carries the 1-based line number of the offending record.
struct ParseError : Error {
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace oaf
