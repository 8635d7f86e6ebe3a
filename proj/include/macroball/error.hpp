#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace macroball {

enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  DepthExceeded,
  Overflow,
  InvalidPoint,
  InvalidDirection,
  TailNeverDominates,
  DegenerateKernel,
  UnsupportedDim,
  MissingExternal,
  MissingInput,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidDirection: return "InvalidDirection";
    case ErrorKind::TailNeverDominates: return "TailNeverDominates";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::MissingExternal: return "MissingExternal";
    case ErrorKind::MissingInput: return "MissingInput";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Usage errors (bad arguments, config, missing inputs) as opposed to
/// numerical failures. The CLI maps the former to exit 2, the latter to 3.
constexpr bool is_usage_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidPoint:
    case ErrorKind::InvalidDirection:
    case ErrorKind::UnsupportedDim:
    case ErrorKind::MissingExternal:
    case ErrorKind::MissingInput:
    case ErrorKind::ConfigError:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace macroball
