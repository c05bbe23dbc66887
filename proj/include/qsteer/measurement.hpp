#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsteer/registers.hpp"
#include "qsteer/state.hpp"

namespace qsteer {

enum class PolBasis { ZHV, Xdiag, Ycirc };

std::string_view to_string(PolBasis basis);

/// Where a polarization (or OAM) analyzer looks.
enum class Scope {
  /// Only light at the setting's site is analyzed; everything else
  /// (photon elsewhere, vacuum) lands in "no-click".
  AtSite,
  /// The photon's register is analyzed wherever the photon is; "no-click"
  /// is the vacuum.
  Register,
};

std::string_view to_string(Scope scope);

struct Outcome {
  std::string label;
  CMatrix projector;  // over the full basis
};

/// A projective measurement over one basis declaration. Outcomes are in
/// declaration order; a "no-click" complement is appended when requested.
class MeasurementSetting {
 public:
  MeasurementSetting(BasisDecl decl, std::string name, std::optional<std::string> site, RegisterKind reg,
                     Scope scope, std::vector<Outcome> outcomes, bool include_no_click);

  const BasisDecl& decl() const { return decl_; }
  const std::string& name() const { return name_; }
  const std::optional<std::string>& site() const { return site_; }
  RegisterKind measured_register() const { return reg_; }
  Scope scope() const { return scope_; }
  bool include_no_click() const { return include_no_click_; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const Outcome& outcome(std::string_view label) const;
  std::vector<std::string> labels() const;

 private:
  BasisDecl decl_;
  std::string name_;
  std::optional<std::string> site_;
  RegisterKind reg_;
  Scope scope_;
  std::vector<Outcome> outcomes_;
  bool include_no_click_;
};

inline const std::string kNoClick = "no-click";

/// ZHV -> {"H-click", "V-click"}, Xdiag -> {"+", "-"} for (|V>±|H>)/sqrt2,
/// Ycirc -> {"L", "R"}; each followed by "no-click".
MeasurementSetting polarization_setting(const BasisDecl& decl, const std::string& site, PolBasis basis,
                                        Scope scope = Scope::AtSite);

/// Analyzer on the OAM register in a basis spanned by two declared values:
/// Z -> {"+m", "-m"} style labels from the values, X -> {"+", "-"} for
/// (|m0>±|m1>)/sqrt2. The complement (other OAM values, vacuum) is "no-click".
MeasurementSetting oam_setting(const BasisDecl& decl, int m0, int m1, PolBasis basis,
                               const std::optional<std::string>& site = std::nullopt);

/// Photon-presence detector at a site: {"click", "no-click"}.
MeasurementSetting presence_setting(const BasisDecl& decl, const std::string& site);

struct OutcomeRecord {
  std::string label;
  double probability = 0.0;
  std::optional<StateVector> conditional_state;  // absent below 1e-14
};

struct DensityOutcome {
  std::string label;
  double probability = 0.0;
  std::optional<DensityOperator> conditional;  // absent below 1e-14
};

std::vector<OutcomeRecord> born_probabilities(const StateVector& s, const MeasurementSetting& m);
std::vector<DensityOutcome> born_probabilities(const DensityOperator& rho, const MeasurementSetting& m);

/// Throws ZeroProbabilityOutcome, UnknownOutcome.
StateVector collapse(const StateVector& s, const MeasurementSetting& m, std::string_view outcome_label);

/// One draw by inverse CDF over outcomes in declaration order, from a
/// generator seeded with `seed`.
OutcomeRecord sample_outcome(const StateVector& s, const MeasurementSetting& m, std::uint64_t seed);

/// `count` draws from one generator seeded with `seed`; returns outcome indices.
std::vector<std::size_t> sample_outcomes(const StateVector& s, const MeasurementSetting& m, std::uint64_t seed,
                                         std::size_t count);
std::vector<std::size_t> sample_outcomes(const DensityOperator& rho, const MeasurementSetting& m,
                                         std::uint64_t seed, std::size_t count);

/// Inverse-CDF draws over a probability list (need not sum exactly to 1).
std::vector<std::size_t> sample_indices(std::span<const double> probabilities, std::uint64_t seed,
                                        std::size_t count);

DensityOperator reduced_state(const StateVector& s, const Subsystem& keep);
DensityOperator reduced_state(const StateVector& s, std::span<const Subsystem> keep);

}  // namespace qsteer
