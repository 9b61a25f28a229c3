#pragma once

#include <stdexcept>
#include <string>

namespace andkit {

enum class ErrorCategory {
  io,
  format,
  config,
  invalid_argument,
};

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::io: return "io";
    case ErrorCategory::format: return "format";
    case ErrorCategory::config: return "config";
    case ErrorCategory::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

/// Process exit code for a failure category (0 is success, 1 is reserved for
/// uncategorized failures).
inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::io: return 3;
    case ErrorCategory::format: return 4;
    case ErrorCategory::invalid_argument: return 5;
  }
  return 1;
}

// Categorized failure. The CLI maps the category to its exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace andkit
