#pragma once

#include <stdexcept>
#include <string>

namespace mct {

enum class ErrorKind {
  InvalidInput,
  InvalidState,
  InvalidMask,
  DimensionMismatch,
  DegenerateProblem,
  Init,
  TrackerLost,
  Ingestion,
  Parse,
  Usage,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the engine and its shell.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidState: return "invalid state";
    case ErrorKind::InvalidMask: return "invalid mask";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::DegenerateProblem: return "degenerate problem";
    case ErrorKind::Init: return "init error";
    case ErrorKind::TrackerLost: return "tracker lost";
    case ErrorKind::Ingestion: return "ingestion error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Usage: return "usage error";
  }
  return "error";
}

}  // namespace mct
