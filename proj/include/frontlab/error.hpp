#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontlab {

/// Failure categories surfaced by the library. Each maps to a stable name used
/// in reports and to a CLI exit code.
enum class ErrorKind {
  InvalidSpec,
  InvalidArgument,
  EmptySet,
  WindowOverflow,
  NotInHull,
  Unreachable,
  NoParents,
  InvalidPath,
  RequiresAutonomous,
  RealizationFailed,
  CflViolation,
  NumericBlowup,
  InvalidConfig,
  Io,
};

constexpr std::string_view error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::EmptySet: return "empty-set";
    case ErrorKind::WindowOverflow: return "window-overflow";
    case ErrorKind::NotInHull: return "not-in-hull";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::NoParents: return "no-parents";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::RequiresAutonomous: return "requires-autonomous";
    case ErrorKind::RealizationFailed: return "realization-failed";
    case ErrorKind::CflViolation: return "cfl-violation";
    case ErrorKind::NumericBlowup: return "numeric-blowup";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace frontlab
