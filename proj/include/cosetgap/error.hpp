#pragma once

#include <stdexcept>
#include <string>

namespace cosetgap {

// Process exit codes used by the command line tool. Each exception type below
// carries the code it maps to.
enum class ExitCode : int {
  ok = 0,
  internal = 1,
  parse = 2,
  enumeration = 3,
  invalid_phi = 4,
  rejected = 5,
  inapplicable = 10,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::internal)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ")",
              ExitCode::parse),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class EnumerationError : public Error {
 public:
  explicit EnumerationError(const std::string& what)
      : Error(what, ExitCode::enumeration) {}
};

class InvalidPhiError : public Error {
 public:
  explicit InvalidPhiError(const std::string& what)
      : Error(what, ExitCode::invalid_phi) {}
};

class InapplicableError : public Error {
 public:
  explicit InapplicableError(const std::string& what)
      : Error(what, ExitCode::inapplicable) {}
};

class RejectedError : public Error {
 public:
  explicit RejectedError(const std::string& what)
      : Error(what, ExitCode::rejected) {}
};

// Thrown when an exact search would exceed its configured budget.
class TooLargeError : public Error {
 public:
  explicit TooLargeError(const std::string& what) : Error(what) {}
};

// A mathematical guarantee failed to hold. Always an implementation defect.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what) {}
};

#define COSETGAP_ASSERT(cond, msg)                                        \
  do {                                                                    \
    if (!(cond)) {                                                        \
      throw ::cosetgap::InvariantViolation(std::string("assertion `") +   \
                                           #cond + "` failed: " + (msg)); \
    }                                                                     \
  } while (false)

}  // namespace cosetgap
