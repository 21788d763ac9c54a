#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsk {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the command layer in its error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define NSK_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

NSK_DEFINE_ERROR(DomainError);
NSK_DEFINE_ERROR(PositivityError);
NSK_DEFINE_ERROR(LinearSolveError);
NSK_DEFINE_ERROR(BlowupError);
NSK_DEFINE_ERROR(ConfigError);
NSK_DEFINE_ERROR(InsufficientSnapshots);
NSK_DEFINE_ERROR(NormalizationError);
NSK_DEFINE_ERROR(KernelUnderresolved);
NSK_DEFINE_ERROR(GridMismatch);
NSK_DEFINE_ERROR(QuadratureFailure);
NSK_DEFINE_ERROR(NotBoundable);
NSK_DEFINE_ERROR(ValidationError);
NSK_DEFINE_ERROR(FormatError);

#undef NSK_DEFINE_ERROR

/// Config syntax error; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("ParseError", "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nsk
