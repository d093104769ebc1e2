#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace targetlab {

enum class ErrorCode {
  domain,
  parameter,
  resolution,
  divergent_mass,
  precondition,
  non_contraction,
  range,
  bracket,
  singular_parameters,
  shape,
  blow_up,
  statistics,
  out_of_regime,
  convention,
  config,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures derive from this; `code()` lets the CLI map them to
// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for failures caused by bad input rather than by the numerics.
  bool is_config_error() const noexcept {
    return code_ == ErrorCode::config || code_ == ErrorCode::parameter ||
           code_ == ErrorCode::io;
  }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::divergent_mass: return "divergent-mass";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::non_contraction: return "non-contraction";
    case ErrorCode::range: return "range";
    case ErrorCode::bracket: return "bracket";
    case ErrorCode::singular_parameters: return "singular-parameters";
    case ErrorCode::shape: return "shape";
    case ErrorCode::blow_up: return "blow-up";
    case ErrorCode::statistics: return "statistics";
    case ErrorCode::out_of_regime: return "out-of-regime";
    case ErrorCode::convention: return "convention";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace targetlab
