#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conf {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  SingularJacobian,
  NotAffine,
  NotEtaOrthogonal,
  InsufficientSamples,
  MixedMonotonicity,
  ZeroDerivative,
  NotSeparable,
  NotConformal,
  NotWaveSolution,
  DegenerateRectangle,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library. `offset` is set for SyntaxError (byte
// offset into the parsed source); `subject` names the offending subexpression,
// identifier, or point where that makes sense.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string subject = {},
        std::optional<std::size_t> offset = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorKind kind_;
  std::string subject_;
  std::optional<std::size_t> offset_;
};

}  // namespace conf
