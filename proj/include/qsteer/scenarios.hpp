#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsteer/measurement.hpp"
#include "qsteer/steering.hpp"

namespace qsteer {

/// Named preparations. Text forms: "eq1", "twc", "hardy" or "hardy:q,r",
/// "qplate_tripartite", "noisy:v".
struct PresetId {
  enum class Name { Eq1, Twc, Hardy, QplateTripartite, Noisy };

  Name name = Name::Eq1;
  double q = 0.70710678118654752440;
  double r = 0.70710678118654752440;
  double v = 1.0;

  static PresetId eq1() { return {}; }
  static PresetId twc() { return {Name::Twc}; }
  static PresetId hardy(double q, double r);
  static PresetId qplate_tripartite() { return {Name::QplateTripartite}; }
  static PresetId noisy(double v);

  /// Throws BadParameters.
  static PresetId parse(std::string_view text);
  std::string to_string() const;
};

using PresetState = std::variant<StateVector, DensityOperator>;

/// eq1 = (|PUE,H> + |NY,V>)/sqrt2; twc = (|b1,H> + i|b2,H>)/sqrt2;
/// hardy = q|vac> + (ir/sqrt2)|u1,H> + (r/sqrt2)|u2,H>;
/// qplate_tripartite = (1/2)[|PUE,H>(|+2>+|-2>) + i|NY,V>(|+2>-|-2>)];
/// noisy(v) = v eq1 + (1-v) I/4 on the path (x) polarization pair.
PresetState preset(const PresetId& id);
DensityOperator preset_density(const PresetId& id);

/// Who holds what in a preset.
struct PresetRoles {
  std::string alice_site;
  std::string bob_site;
  SteeringSetup setup;
};

PresetRoles preset_roles(const PresetId& id);

/// Parses one measurement choice for a state over `decl`:
///   <site>:<Z|X|Y>   polarization analyzer at that site only
///   pol:<Z|X|Y>      polarization register wherever the photon is
///   oam:<Z|X|Y>      OAM analyzer on the largest/smallest declared values
///   presence:<site>  photon-presence detector
/// Throws BadParameters, UnknownSite, OamOverflow.
MeasurementSetting parse_setting_choice(const BasisDecl& decl, std::string_view choice,
                                        const std::string& alice_site);

struct ReportOutcome {
  std::string label;
  double probability = 0.0;
  std::optional<StateVector> conditional_state;  // pure preparations
  std::optional<DensityOperator> conditional;    // mixed preparations
  std::optional<CMatrix> bob_state;              // occupation of Bob's site
  std::optional<CMatrix> path_state;             // absent when the photon leaves the rail
  std::optional<std::size_t> samples;
};

struct ReportSetting {
  std::string choice;
  std::string name;
  std::string scope;
  std::vector<ReportOutcome> outcomes;
};

struct ScenarioReport {
  std::string preset;
  std::string alice_register;
  std::string bob_register;
  CMatrix bob_reduced;  // occupation of Bob's site before any measurement
  std::vector<ReportSetting> settings;
  double no_signaling_residual = 0.0;
  std::optional<double> cjwr;        // {Z, X} pairs
  std::optional<ChshResult> chsh;    // 5 degree grid optimum
  std::optional<std::uint64_t> seed;
  std::size_t sample_count = 0;
};

/// Born table, conditional states, Bob's reduced states and inequality
/// values for a preset under the given choices. With `samples` > 0 each
/// setting is also sampled `samples` times from a generator seeded with `seed`.
ScenarioReport scenario_report(const PresetId& id, std::span<const std::string> choices, std::uint64_t seed = 0,
                               std::size_t samples = 0);

}  // namespace qsteer
