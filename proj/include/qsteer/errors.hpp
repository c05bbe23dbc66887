#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsteer {

/// Physics and contract violations raised by the simulator. Parse failures of
/// circuit text use ParseError (circuit.hpp) instead.
enum class ErrorKind {
  ZeroState,
  BasisMismatch,
  InvalidState,
  UnknownSubsystem,
  NonUnitary,
  NonHermitian,
  DimensionMismatch,
  UnknownSite,
  DoubleExcitation,
  SiteCollision,
  OamOverflow,
  ZeroProbabilityOutcome,
  UnknownOutcome,
  NonQubitBobMarginal,
  NonDichotomicObservable,
  GridTooCoarse,
  TooManySettings,
  BadParameters,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  /// Position of the circuit element that raised the error, if it came out
  /// of run_circuit.
  std::optional<std::size_t> element_index() const noexcept { return element_; }

  Error at_element(std::size_t index) const;

 private:
  ErrorKind kind_;
  std::optional<std::size_t> element_;
};

}  // namespace qsteer
