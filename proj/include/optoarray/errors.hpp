#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optoarray {

/// Base class for every error raised by the library. `code()` is a stable,
/// kebab-case identifier suitable for tests and machine consumption.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& message)
      : Error("invalid-parameter", message) {}
};

/// One violated invariant found by `validate`.
struct Issue {
  std::string code;   // e.g. "cascade-not-forward"
  std::string field;  // e.g. "couplings[0]"
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }
  bool has(const std::string& code) const;

 private:
  std::vector<Issue> issues_;
};

}  // namespace optoarray
