#include "qsteer/errors.hpp"

namespace qsteer {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::UnknownSubsystem: return "UnknownSubsystem";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownSite: return "UnknownSite";
    case ErrorKind::DoubleExcitation: return "DoubleExcitation";
    case ErrorKind::SiteCollision: return "SiteCollision";
    case ErrorKind::OamOverflow: return "OamOverflow";
    case ErrorKind::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorKind::UnknownOutcome: return "UnknownOutcome";
    case ErrorKind::NonQubitBobMarginal: return "NonQubitBobMarginal";
    case ErrorKind::NonDichotomicObservable: return "NonDichotomicObservable";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::TooManySettings: return "TooManySettings";
    case ErrorKind::BadParameters: return "BadParameters";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Error Error::at_element(std::size_t index) const {
  // Strip the "Kind: " prefix so the annotated message does not repeat it.
  std::string message = what();
  const auto prefix = std::string(to_string(kind_)) + ": ";
  if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
  Error annotated(kind_, "element #" + std::to_string(index + 1) + ": " + message);
  annotated.element_ = index;
  return annotated;
}

}  // namespace qsteer
