// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qsteer/circuit.hpp"
#include "qsteer/errors.hpp"
#include "qsteer/optics.hpp"
#include "qsteer/scenarios.hpp"
#include "qsteer/steering.hpp"

using namespace qsteer;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const double kRoot2 = std::sqrt(2.0);

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

std::string corpus(const std::string& name) { return std::string(QSTEER_CORPUS_DIR) + "/" + name; }

StateVector literal(const BasisDecl& d, const std::vector<std::pair<BasisKet, Complex>>& terms) {
  return StateVector::from_terms(d, terms);
}

StateVector eq1_state() { return std::get<StateVector>(preset(PresetId::eq1())); }

// 1. The heralded-photon table prepares eq1.
void preparation(Check& c) {
  const auto s = run_circuit(parse_circuit(oracle::read_file(corpus("fig1.table"))));
  const auto target = literal(BasisDecl({"in", "NY", "PUE"}),
                              {{BasisKet::photon("PUE", Pol::H), kH}, {BasisKet::photon("NY", Pol::V), kH}});
  const double f = fidelity(s, target);
  c.detail << "fidelity " << f << "; ";
  c.require(f >= 1.0 - 1e-10, "fidelity");
  c.require(fidelity(s, eq1_state()) >= 1.0 - 1e-10, "preset fidelity");
}

// 2. Polarization Z at NY.
void scenario_one(Check& c) {
  const auto s = eq1_state();
  const auto table = born_probabilities(s, polarization_setting(s.decl(), "NY", PolBasis::ZHV));
  double v = -1, n = -1, h = -1;
  for (const auto& rec : table) {
    if (rec.label == "V-click") v = rec.probability;
    if (rec.label == "no-click") n = rec.probability;
    if (rec.label == "H-click") h = rec.probability;
  }
  c.detail << "V " << v << " no-click " << n << " H " << h << "; ";
  c.require(std::abs(v - 0.5) <= 1e-12 && std::abs(n - 0.5) <= 1e-12 && std::abs(h) <= 1e-12, "Born table");
  const auto b_v = literal(s.decl(), {{BasisKet::photon("NY", Pol::V), 1.0}});
  const auto a_h = literal(s.decl(), {{BasisKet::photon("PUE", Pol::H), 1.0}});
  for (const auto& rec : table) {
    if (rec.label == "V-click") c.require(rec.conditional_state && fidelity(*rec.conditional_state, b_v) >= 1 - 1e-10, "V conditional");
    if (rec.label == "no-click") c.require(rec.conditional_state && fidelity(*rec.conditional_state, a_h) >= 1 - 1e-10, "no-click conditional");
  }
}

// 3. Diagonal polarization on the photon wherever it is.
void scenario_two(Check& c) {
  const auto s = eq1_state();
  const auto m = polarization_setting(s.decl(), "NY", PolBasis::Xdiag, Scope::Register);
  const auto path = QubitRegister::dual_rail("PUE", "NY");
  double worst = 0.0;
  for (const auto& rec : born_probabilities(s, m)) {
    if (rec.label == kNoClick) {
      c.require(rec.probability < 1e-12, "no-click weight");
      continue;
    }
    c.require(std::abs(rec.probability - 0.5) <= 1e-12, rec.label + " probability");
    if (!rec.conditional_state) {
      c.require(false, rec.label + " conditional");
      continue;
    }
    const auto rho = to_density(*rec.conditional_state);
    const double sign = rec.label == "+" ? 1.0 : -1.0;
    Eigen::Vector2cd ab(kH, sign * kH);
    worst = std::max(worst, (single_qubit(rho, path) - ab * ab.adjoint()).cwiseAbs().maxCoeff());
    const CMatrix bob = partial_trace(rho, Subsystem::occupation("PUE")).matrix();
    worst = std::max(worst, (bob - CMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff());
  }
  c.detail << "max deviation " << worst << "; ";
  c.require(worst <= 1e-10, "path marginals and Bob state");
}

/// Analyzers local to Alice: at her site, photon presence there and, when
/// she holds an internal degree of freedom, the polarization and OAM registers.
std::vector<MeasurementSetting> alice_settings(const BasisDecl& d, const PresetRoles& roles) {
  std::vector<MeasurementSetting> out;
  const bool internal = roles.setup.alice.kind() != QubitRegister::Kind::Occupation;
  for (auto b : {PolBasis::ZHV, PolBasis::Xdiag, PolBasis::Ycirc}) {
    out.push_back(polarization_setting(d, roles.alice_site, b, Scope::AtSite));
    if (internal) out.push_back(polarization_setting(d, roles.alice_site, b, Scope::Register));
  }
  out.push_back(presence_setting(d, roles.alice_site));
  const auto& oam = d.oam_values();
  if (internal && oam.size() >= 2)
    for (auto b : {PolBasis::ZHV, PolBasis::Xdiag, PolBasis::Ycirc}) out.push_back(oam_setting(d, oam.back(), oam.front(), b));
  return out;
}

// 4. No-signaling over presets and setting pairs.
void no_signaling(Check& c) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const char* name : {"eq1", "twc", "hardy", "hardy:0.6,0.8", "qplate_tripartite", "noisy:0", "noisy:0.5", "noisy:1"}) {
    const auto id = PresetId::parse(name);
    const auto rho = preset_density(id);
    const auto roles = preset_roles(id);
    const std::vector<QubitBasis> bases{QubitBasis::Z, QubitBasis::X, QubitBasis::Y};
    for (std::size_t i = 0; i < bases.size(); ++i)
      for (std::size_t j = i + 1; j < bases.size(); ++j) {
        const std::vector<QubitBasis> pair{bases[i], bases[j]};
        worst = std::max(worst, no_signaling_residual(compute_assemblage(rho, roles.setup, pair)));
        ++pairs;
      }
    const auto settings = alice_settings(*rho.decl(), roles);
    for (std::size_t i = 0; i < settings.size(); ++i)
      for (std::size_t j = i + 1; j < settings.size(); ++j) {
        const std::vector<MeasurementSetting> pair{settings[i], settings[j]};
        worst = std::max(worst, no_signaling_residual(compute_assemblage(rho, roles.setup.bob, pair)));
        ++pairs;
      }
  }
  c.detail << pairs << " setting pairs, max residual " << worst << "; ";
  c.require(worst <= 1e-9, "marginals agree");
}

// 5. CHSH.
void chsh(Check& c) {
  const auto setup = preset_roles(PresetId::eq1()).setup;
  const CMatrix r = inequality_state(preset_density(PresetId::eq1()), setup);
  const double s = chsh_value(r, 0, 90, 45, 135).value;
  const double opt = chsh_optimize(r, 5.0).value;
  const auto product = to_density(run_circuit(parse_circuit(oracle::read_file(corpus("product.table")))));
  const double prod = chsh_optimize(inequality_state(product, setup), 5.0).value;
  const double white = chsh_optimize(inequality_state(preset_density(PresetId::noisy(0.0)), setup), 5.0).value;
  c.detail << "S " << s << " opt " << opt << " product " << prod << " noisy(0) " << white << "; ";
  c.require(std::abs(s - 2.0 * kRoot2) <= 1e-9, "S at stated angles");
  c.require(opt >= 2.81, "optimum");
  c.require(prod <= 2.0 + 1e-9 && white <= 2.0 + 1e-9, "product bound");

  std::mt19937_64 gen(20240601);
  const BasisDecl d({"NY", "PUE"});
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    CMatrix pair;
    if (trial % 2 == 0) {
      CVector amp = CVector::Zero(5);
      amp.tail(4) = oracle::random_unit(gen, 4);
      pair = inequality_state(to_density(StateVector(d, amp)), SteeringSetup::rail("NY", "PUE"));
    } else {
      pair = oracle::random_density(gen, 4);
    }
    worst = std::max(worst, chsh_optimize(pair, 5.0).value);
  }
  c.detail << "max over 1000 random states " << worst << "; ";
  c.require(worst <= 2.0 * kRoot2 + 1e-9, "Tsirelson bound");
}

// 6. CJWR.
void cjwr(Check& c) {
  const std::vector<QubitBasis> zx{QubitBasis::Z, QubitBasis::X};
  const auto setup = preset_roles(PresetId::eq1()).setup;
  const double f = cjwr_value(inequality_state(preset_density(PresetId::eq1()), setup), cjwr_pairs(zx));
  c.detail << "eq1 " << f << "; ";
  c.require(std::abs(f - kRoot2) <= 1e-9, "eq1 value");
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double v = k / 10.0;
    const double fv = cjwr_value(inequality_state(preset_density(PresetId::noisy(v)), setup), cjwr_pairs(zx));
    worst = std::max(worst, std::abs(fv - kRoot2 * v));
  }
  c.detail << "noisy max deviation " << worst << "; ";
  c.require(worst <= 1e-9, "noisy values");
}

SteeringVerdict verdict(double v, std::size_t grid) {
  const std::vector<QubitBasis> zx{QubitBasis::Z, QubitBasis::X};
  const auto id = PresetId::noisy(v);
  return lhs_feasibility(compute_assemblage(preset_density(id), preset_roles(id).setup, zx), grid);
}

bool certified(double v, std::size_t grid) { return verdict(v, grid).status == LhsStatus::UnsteerableCertified; }

// 7. LHS linear program.
void lhs(Check& c) {
  const auto low = verdict(0.4, 20);
  c.detail << "noisy(0.4) " << to_string(low.status) << " residual " << low.residual << "; ";
  c.require(low.status == LhsStatus::UnsteerableCertified && low.residual < 1e-7, "noisy(0.4) certified");
  const auto high = verdict(0.9, 20);
  const std::vector<QubitBasis> zx{QubitBasis::Z, QubitBasis::X};
  const double f = cjwr_value(inequality_state(preset_density(PresetId::noisy(0.9)), preset_roles(PresetId::eq1()).setup),
                              cjwr_pairs(zx));
  c.detail << "noisy(0.9) " << to_string(high.status) << " cjwr " << f << "; ";
  c.require(high.status == LhsStatus::NoLHSFoundAtResolution && f > 1.0, "noisy(0.9) steerable");

  double lo = 0.65, hi = 0.75;
  const bool lo_ok = certified(lo, 40), hi_ok = !certified(hi, 40);
  c.require(lo_ok && hi_ok, "transition inside (0.65, 0.75)");
  if (lo_ok && hi_ok) {
    for (int k = 0; k < 10; ++k) {
      const double mid = 0.5 * (lo + hi);
      (certified(mid, 40) ? lo : hi) = mid;
    }
    c.detail << "grid 40 transition in [" << lo << ", " << hi << "]; ";
  }
}

// 8. Tripartite q-plate state.
void tripartite(Check& c) {
  const auto circuit = parse_circuit(oracle::read_file(corpus("tripartite.table")));
  const auto d = circuit.decl();
  const auto out = run_circuit(circuit);
  const auto quoted = literal(d, {{BasisKet::photon("PUE", Pol::H, 2), 0.5},
                                  {BasisKet::photon("PUE", Pol::H, -2), 0.5},
                                  {BasisKet::photon("NY", Pol::V, 2), Complex(0, 0.5)},
                                  {BasisKet::photon("NY", Pol::V, -2), Complex(0, -0.5)}});
  const double f = fidelity(out, quoted);

  Circuit partial = circuit;
  partial.elements.resize(2);
  const auto mid = run_circuit(partial);
  // (|L,-2> + |R,+2>)/sqrt2 with |L> = (H - iV)/sqrt2, |R> = (H + iV)/sqrt2.
  const auto quoted_mid = literal(d, {{BasisKet::photon("in", Pol::H, -2), 0.5},
                                      {BasisKet::photon("in", Pol::V, -2), Complex(0, -0.5)},
                                      {BasisKet::photon("in", Pol::H, 2), 0.5},
                                      {BasisKet::photon("in", Pol::V, 2), Complex(0, 0.5)}});
  const double fm = fidelity(mid, quoted_mid);
  c.detail << "output fidelity " << f << " q-plate fidelity " << fm << "; ";
  c.require(f >= 1 - 1e-10, "output state");
  c.require(fm >= 1 - 1e-10, "intermediate state");
}

// 9. Parser round-trip and fuzz.
void parser(Check& c) {
  std::size_t files = 0;
  for (const auto& dir : {std::filesystem::path(QSTEER_CORPUS_DIR), std::filesystem::path(QSTEER_CORPUS_DIR) / "bad"}) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".table") continue;
      try {
        const auto first = parse_circuit(oracle::read_file(entry.path().string()));
        c.require(parse_circuit(format_circuit(first)) == first, entry.path().filename().string());
        ++files;
      } catch (const ParseError&) {
        c.require(dir.filename() == "bad", "parse of " + entry.path().filename().string());
      }
    }
  }
  std::mt19937_64 gen(777);
  std::uniform_int_distribution<int> len(0, 256), byte(0, 255);
  std::size_t parsed = 0, syntax = 0, other = 0, crashes = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::string text(static_cast<std::size_t>(len(gen)), '\0');
    for (auto& ch : text) ch = static_cast<char>(byte(gen));
    try {
      parse_circuit(text);
      ++parsed;
    } catch (const ParseError& e) {
      (e.kind() == ParseErrorKind::SyntaxError ? syntax : other) += 1;
    } catch (...) {
      ++crashes;
    }
  }
  c.detail << files << " corpus tables round-trip; fuzz: " << syntax << " SyntaxError, " << other
           << " other ParseError, " << parsed << " parsed, " << crashes << " unstructured; ";
  c.require(files >= 9, "corpus size");
  c.require(crashes == 0, "structured errors only");
}

// 10. Monte-Carlo sampling of criterion 2.
void monte_carlo(Check& c) {
  const auto s = eq1_state();
  const auto m = polarization_setting(s.decl(), "NY", PolBasis::ZHV);
  std::vector<double> probs;
  for (const auto& rec : born_probabilities(s, m)) probs.push_back(rec.probability);
  std::vector<std::size_t> counts(probs.size(), 0);
  for (auto k : sample_outcomes(s, m, 20240601, 100000)) ++counts[k];
  const double chi2 = oracle::chi_square(counts, probs);
  c.detail << "chi2 " << chi2 << " (df 1, critical 6.635); ";
  c.require(chi2 < 6.635, "goodness of fit");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"preparation fidelity", preparation}, {"Born table at NY", scenario_one},
      {"diagonal analyzer", scenario_two},   {"no-signaling", no_signaling},
      {"CHSH", chsh},                        {"CJWR", cjwr},
      {"LHS linear program", lhs},           {"tripartite state", tripartite},
      {"parser", parser},                    {"Monte-Carlo", monte_carlo}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%.2fs) %s\n", c.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, secs,
                c.detail.str().c_str());
    failures += c.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
