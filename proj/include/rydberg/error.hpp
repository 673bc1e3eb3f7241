#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rydberg {

enum class ErrorKind {
  invalid_parameter,
  no_unique_steady_state,
  step_too_large,
  singularity,
  invalid_coherence,
  no_splitting,
  demodulation_infeasible,
  parse,
  validation,
  usage,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::no_unique_steady_state: return "no-unique-steady-state";
    case ErrorKind::step_too_large: return "step-too-large";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::invalid_coherence: return "invalid-coherence";
    case ErrorKind::no_splitting: return "no-splitting";
    case ErrorKind::demodulation_infeasible: return "demodulation-infeasible";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, std::string_view message) {
  if (!condition) throw Error(kind, std::string(message));
}

}  // namespace rydberg
