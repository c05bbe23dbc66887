#include "qsteer/scenarios.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "qsteer/errors.hpp"
#include "qsteer/registers.hpp"

namespace qsteer {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw Error(ErrorKind::BadParameters, "bad " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

std::string short_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

BasisDecl rail_decl(std::vector<int> oam = {0}) { return BasisDecl({"in", "NY", "PUE"}, std::move(oam)); }

StateVector eq1_state() {
  const double h = std::numbers::sqrt2 / 2.0;
  return StateVector::from_terms(rail_decl(), {{BasisKet::photon("PUE", Pol::H), h}, {BasisKet::photon("NY", Pol::V), h}});
}

}  // namespace

PresetId PresetId::hardy(double q, double r) {
  if (!std::isfinite(q) || !std::isfinite(r) || std::abs(q * q + r * r - 1.0) > kAlgebraTol)
    throw Error(ErrorKind::BadParameters, "hardy needs q^2 + r^2 = 1");
  PresetId id{Name::Hardy};
  id.q = q;
  id.r = r;
  return id;
}

PresetId PresetId::noisy(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::BadParameters, "noisy needs v in [0, 1]");
  PresetId id{Name::Noisy};
  id.v = v;
  return id;
}

PresetId PresetId::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto tail = colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  const bool has_args = colon != std::string_view::npos;
  if (head == "eq1" && !has_args) return eq1();
  if (head == "twc" && !has_args) return twc();
  if (head == "qplate_tripartite" && !has_args) return qplate_tripartite();
  if (head == "hardy") {
    if (!has_args) return PresetId{Name::Hardy};
    const auto comma = tail.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorKind::BadParameters, "hardy expects 'hardy:q,r'");
    return hardy(parse_number(tail.substr(0, comma), "q"), parse_number(tail.substr(comma + 1), "r"));
  }
  if (head == "noisy") {
    if (!has_args) throw Error(ErrorKind::BadParameters, "noisy expects 'noisy:v'");
    return noisy(parse_number(tail, "visibility"));
  }
  throw Error(ErrorKind::BadParameters, "unknown preset '" + std::string(text) +
                                            "' (expected eq1, twc, hardy[:q,r], qplate_tripartite, noisy:v)");
}

std::string PresetId::to_string() const {
  switch (name) {
    case Name::Eq1: return "eq1";
    case Name::Twc: return "twc";
    case Name::Hardy: return "hardy:" + short_double(q) + "," + short_double(r);
    case Name::QplateTripartite: return "qplate_tripartite";
    case Name::Noisy: return "noisy:" + short_double(v);
  }
  return "?";
}

PresetState preset(const PresetId& id) {
  const double h = std::numbers::sqrt2 / 2.0;
  const Complex i(0, 1);
  switch (id.name) {
    case PresetId::Name::Eq1: return eq1_state();
    case PresetId::Name::Twc:
      return StateVector::from_terms(BasisDecl({"b1", "b2"}),
                                     {{BasisKet::photon("b1", Pol::H), h}, {BasisKet::photon("b2", Pol::H), i * h}});
    case PresetId::Name::Hardy:
      return StateVector::from_terms(BasisDecl({"u1", "u2"}), {{BasisKet::vac(), id.q},
                                                               {BasisKet::photon("u1", Pol::H), i * id.r * h},
                                                               {BasisKet::photon("u2", Pol::H), id.r * h}});
    case PresetId::Name::QplateTripartite:
      return StateVector::from_terms(rail_decl({-2, 0, 2}), {{BasisKet::photon("PUE", Pol::H, 2), 0.5},
                                                             {BasisKet::photon("PUE", Pol::H, -2), 0.5},
                                                             {BasisKet::photon("NY", Pol::V, 2), 0.5 * i},
                                                             {BasisKet::photon("NY", Pol::V, -2), -0.5 * i}});
    case PresetId::Name::Noisy: {
      const auto pure = eq1_state();
      const auto& decl = pure.decl();
      CMatrix rho = id.v * (pure.amplitudes() * pure.amplitudes().adjoint());
      for (const char* site : {"NY", "PUE"})
        for (Pol pol : {Pol::H, Pol::V}) {
          const auto k = static_cast<Eigen::Index>(decl.index_of(site, pol, 0));
          rho(k, k) += (1.0 - id.v) / 4.0;
        }
      return DensityOperator::over(decl, std::move(rho));
    }
  }
  throw Error(ErrorKind::BadParameters, "unknown preset");
}

DensityOperator preset_density(const PresetId& id) {
  auto state = preset(id);
  if (auto* s = std::get_if<StateVector>(&state)) return to_density(*s);
  return std::get<DensityOperator>(std::move(state));
}

PresetRoles preset_roles(const PresetId& id) {
  switch (id.name) {
    case PresetId::Name::Twc: return {"b1", "b2", SteeringSetup::occupation("b1", "b2")};
    case PresetId::Name::Hardy: return {"u1", "u2", SteeringSetup::occupation("u1", "u2")};
    case PresetId::Name::QplateTripartite: {
      auto setup = SteeringSetup::rail("NY", "PUE");
      setup.alice = QubitRegister::oam_pair(2, -2);
      return {"NY", "PUE", setup};
    }
    default: return {"NY", "PUE", SteeringSetup::rail("NY", "PUE")};
  }
}

MeasurementSetting parse_setting_choice(const BasisDecl& decl, std::string_view choice,
                                        const std::string& alice_site) {
  const auto colon = choice.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == choice.size())
    throw Error(ErrorKind::BadParameters, "setting '" + std::string(choice) + "' is not of the form <where>:<basis>");
  const auto head = std::string(choice.substr(0, colon));
  const auto tail = choice.substr(colon + 1);
  if (head == "presence") return presence_setting(decl, std::string(tail));
  const auto basis = [&] {
    switch (parse_qubit_basis(tail)) {
      case QubitBasis::Z: return PolBasis::ZHV;
      case QubitBasis::X: return PolBasis::Xdiag;
      case QubitBasis::Y: return PolBasis::Ycirc;
    }
    return PolBasis::ZHV;
  }();
  if (head == "pol") return polarization_setting(decl, alice_site, basis, Scope::Register);
  if (head == "oam") {
    const auto& values = decl.oam_values();
    if (values.size() < 2) throw Error(ErrorKind::OamOverflow, "OAM analyzer needs two declared OAM values");
    return oam_setting(decl, values.back(), values.front(), basis);
  }
  return polarization_setting(decl, head, basis, Scope::AtSite);
}

namespace {

std::optional<CMatrix> path_qubit(const DensityOperator& cond, const QubitRegister& reg) {
  try {
    return single_qubit(cond, reg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonQubitBobMarginal) throw;
    return std::nullopt;
  }
}

}  // namespace

ScenarioReport scenario_report(const PresetId& id, std::span<const std::string> choices, std::uint64_t seed,
                               std::size_t samples) {
  const auto state = preset(id);
  const auto rho = preset_density(id);
  const auto& decl = *rho.decl();
  const auto roles = preset_roles(id);
  const auto bob_occ = Subsystem::occupation(roles.bob_site);

  ScenarioReport report;
  report.preset = id.to_string();
  report.alice_register = roles.setup.alice.describe();
  report.bob_register = roles.setup.bob.describe();
  report.bob_reduced = partial_trace(rho, bob_occ).matrix();
  if (samples > 0) report.seed = seed;
  report.sample_count = samples;

  const auto* pure = std::get_if<StateVector>(&state);
  std::vector<MeasurementSetting> settings;
  for (const auto& choice : choices) {
    auto m = parse_setting_choice(decl, choice, roles.alice_site);
    ReportSetting entry{choice, m.name(), std::string(to_string(m.scope())), {}};
    std::vector<std::size_t> counts(m.outcomes().size(), 0);
    if (samples > 0) {
      const auto draws = pure ? sample_outcomes(*pure, m, seed, samples) : sample_outcomes(rho, m, seed, samples);
      for (auto k : draws) ++counts[k];
    }
    const auto records = born_probabilities(rho, m);
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& rec = records[k];
      ReportOutcome out{rec.label, rec.probability, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                        std::nullopt};
      if (rec.conditional) {
        if (pure) out.conditional_state = collapse(*pure, m, rec.label);
        else out.conditional = rec.conditional;
        out.bob_state = partial_trace(*rec.conditional, bob_occ).matrix();
        out.path_state = path_qubit(*rec.conditional, roles.setup.bob_path);
      }
      if (samples > 0) out.samples = counts[k];
      entry.outcomes.push_back(std::move(out));
    }
    report.settings.push_back(std::move(entry));
    settings.push_back(std::move(m));
  }
  report.no_signaling_residual = no_signaling_residual(compute_assemblage(rho, roles.setup.bob, settings));

  try {
    const CMatrix rho2 = inequality_state(rho, roles.setup);
    const QubitBasis zx[] = {QubitBasis::Z, QubitBasis::X};
    report.cjwr = cjwr_value(rho2, cjwr_pairs(zx));
    report.chsh = chsh_optimize(rho2, 5.0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonQubitBobMarginal) throw;
  }
  return report;
}

}  // namespace qsteer
