#pragma once

#include <stdexcept>
#include <string>

namespace tmg {

enum class ErrorKind { domain, precision, configuration, resource, internal };

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::precision: return "precision";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::resource: return "resource";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// Raised when a requested precision window cannot be guaranteed.
/// `achievable` carries the best window (or the required parameter) that would work.
struct PrecisionError : Error {
  PrecisionError(const std::string& what, long long achievable)
      : Error(ErrorKind::precision, what), achievable(achievable) {}
  long long achievable;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::configuration, what) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

/// An exact identity failed. Always a bug, never a precision issue.
struct InternalError : Error {
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace tmg
