#include "conf/error.hpp"

namespace conf {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NotAffine: return "NotAffine";
    case ErrorKind::NotEtaOrthogonal: return "NotEtaOrthogonal";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::MixedMonotonicity: return "MixedMonotonicity";
    case ErrorKind::ZeroDerivative: return "ZeroDerivative";
    case ErrorKind::NotSeparable: return "NotSeparable";
    case ErrorKind::NotConformal: return "NotConformal";
    case ErrorKind::NotWaveSolution: return "NotWaveSolution";
    case ErrorKind::DegenerateRectangle: return "DegenerateRectangle";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string subject,
             std::optional<std::size_t> offset)
    : std::runtime_error(message),
      kind_(kind),
      subject_(std::move(subject)),
      offset_(offset) {}

}  // namespace conf
