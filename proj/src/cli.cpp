#include "qsteer/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qsteer/circuit.hpp"
#include "qsteer/errors.hpp"
#include "qsteer/scenarios.hpp"
#include "qsteer/serialize.hpp"
#include "qsteer/steering.hpp"

namespace qsteer::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

/// Reads a state file: JSON emitted by `run`, or circuit text.
PresetState load_input(const std::string& path) {
  const auto text = read_file(path);
  if (looks_like_json(text)) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(ParseErrorKind::SyntaxError, 0, 0, "JSON", e.what());
    }
    return state_from_json(j);
  }
  return run_circuit(parse_circuit(text));
}

DensityOperator as_density(const PresetState& s) {
  if (const auto* v = std::get_if<StateVector>(&s)) return to_density(normalize(*v));
  return std::get<DensityOperator>(s);
}

void require_one_source(const RunConfig& c) {
  if (c.input.has_value() == c.preset.has_value())
    throw UsageError("exactly one of --input and --preset is required");
}

/// Party assignment for an input file: the NY/PUE rail when both are
/// declared, otherwise the two declared sites in order.
PresetRoles roles_for(const BasisDecl& decl) {
  if (decl.has_site("NY") && decl.has_site("PUE")) return {"NY", "PUE", SteeringSetup::rail("NY", "PUE")};
  if (decl.sites().size() == 2) {
    const auto& s = decl.sites();
    return {s[0], s[1], SteeringSetup::occupation(s[0], s[1])};
  }
  throw UsageError("cannot assign parties: declare NY and PUE, or exactly two sites");
}

std::vector<QubitBasis> parse_bases(const std::vector<std::string>& settings) {
  std::vector<QubitBasis> bases;
  for (const auto& s : settings) {
    QubitBasis b{};
    try {
      b = parse_qubit_basis(s);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (std::find(bases.begin(), bases.end(), b) != bases.end()) throw UsageError("setting '" + s + "' repeated");
    bases.push_back(b);
  }
  if (bases.empty()) throw UsageError("no settings given");
  return bases;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (!c.out) {
    out << text;
    return;
  }
  std::ofstream f(*c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write '" + *c.out + "'");
  f << text;
}

std::string cmd_run(const RunConfig& c) {
  require_one_source(c);
  const PresetState state = c.input ? load_input(*c.input) : preset(PresetId::parse(*c.preset));
  if (c.format.value_or("json") == "csv") {
    const auto* s = std::get_if<StateVector>(&state);
    if (!s) throw UsageError("csv output needs a pure state");
    std::string text = "ket,re,im\n";
    for (const auto& [ket, value] : s->terms())
      text += ket.label() + "," + shortest(value.real()) + "," + shortest(value.imag()) + "\n";
    return text;
  }
  const Json j = std::holds_alternative<StateVector>(state) ? state_to_json(std::get<StateVector>(state))
                                                            : density_to_json(std::get<DensityOperator>(state));
  return j.dump(2) + "\n";
}

std::string cmd_steer(const RunConfig& c) {
  require_one_source(c);
  if (c.format.value_or("json") != "json") throw UsageError("steer emits json only");
  const auto bases = parse_bases(c.settings.empty() ? std::vector<std::string>{"Z", "X"} : c.settings);
  std::string source;
  DensityOperator rho = [&] {
    if (c.preset) {
      source = PresetId::parse(*c.preset).to_string();
      return preset_density(PresetId::parse(*c.preset));
    }
    source = *c.input;
    return as_density(load_input(*c.input));
  }();
  const auto roles = c.preset ? preset_roles(PresetId::parse(*c.preset)) : roles_for(*rho.decl());

  const auto asm_ = compute_assemblage(rho, roles.setup, bases);
  const CMatrix rho2 = inequality_state(rho, roles.setup);
  const auto verdict = lhs_feasibility(asm_, c.grid);

  Json j;
  j["source"] = source;
  j["alice_register"] = roles.setup.alice.describe();
  j["bob_register"] = roles.setup.bob.describe();
  Json names = Json::array();
  for (auto b : bases) names.push_back(std::string(to_string(b)));
  j["settings"] = std::move(names);
  j["assemblage"] = assemblage_to_json(asm_);
  j["no_signaling_residual"] = no_signaling_residual(asm_);
  j["cjwr"] = bases.size() <= 3 && bases.size() >= 2 ? Json(cjwr_value(rho2, cjwr_pairs(bases))) : Json(nullptr);
  j["chsh"] = chsh_to_json(chsh_optimize(rho2, 5.0));
  const Json verdict_json = verdict_to_json(verdict);
  for (const auto& [key, value] : verdict_json.items()) j[key] = value;
  return j.dump(2) + "\n";
}

struct SweepRow {
  double v = 0.0;
  double cjwr = 0.0;
  double chsh = 0.0;
  LhsStatus verdict = LhsStatus::NoLHSFoundAtResolution;
};

std::string cmd_sweep(const RunConfig& c) {
  if (c.sweep != "v") throw UsageError("only the visibility 'v' can be swept");
  if (c.input || c.preset) throw UsageError("sweep runs over noisy:v and takes no --input/--preset");
  const auto parts = split(c.range, ':');
  double lo = 0.0, hi = 0.0;
  try {
    if (parts.size() != 2) throw std::invalid_argument("range");
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("range");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("range");
  } catch (const std::exception&) {
    throw UsageError("--range must look like 0:1");
  }
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw UsageError("--range must lie within [0, 1] with lo <= hi");
  if (!(c.step > 0.0) || !std::isfinite(c.step)) throw UsageError("--step must be positive");
  const auto format = c.format.value_or("csv");
  const auto bases = parse_bases(c.settings.empty() ? std::vector<std::string>{"Z", "X"} : c.settings);

  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / c.step + 1e-9)) + 1;
  std::vector<SweepRow> rows(count);
  for (std::size_t i = 0; i < count; ++i)
    rows[i].v = std::min(hi, std::round((lo + static_cast<double>(i) * c.step) * 1e12) / 1e12);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        auto& row = rows[i];
        const auto id = PresetId::noisy(row.v);
        const auto rho = preset_density(id);
        const auto roles = preset_roles(id);
        const CMatrix rho2 = inequality_state(rho, roles.setup);
        row.cjwr = bases.size() >= 2 && bases.size() <= 3 ? cjwr_value(rho2, cjwr_pairs(bases)) : 0.0;
        row.chsh = chsh_optimize(rho2, 5.0).value;
        row.verdict = lhs_feasibility(compute_assemblage(rho, roles.setup, bases), c.grid).status;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (format == "json") {
    Json j = Json::array();
    for (const auto& r : rows)
      j.push_back({{"v", r.v}, {"cjwr", r.cjwr}, {"chsh_opt", r.chsh}, {"lhs_verdict", to_string(r.verdict)}});
    return j.dump(2) + "\n";
  }
  std::string text = "v,cjwr,chsh_opt,lhs_verdict\n";
  for (const auto& r : rows)
    text += shortest(r.v) + "," + shortest(r.cjwr) + "," + shortest(r.chsh) + "," + std::string(to_string(r.verdict)) +
            "\n";
  return text;
}

std::string cmd_report(const RunConfig& c) {
  if (!c.preset || c.input) throw UsageError("report needs --preset");
  if (c.format.value_or("json") != "json") throw UsageError("report emits json only");
  const auto id = PresetId::parse(*c.preset);
  auto choices = c.settings;
  if (choices.empty()) choices = {preset_roles(id).alice_site + ":Z", "pol:X"};
  return report_to_json(scenario_report(id, choices, c.seed, c.samples)).dump(2) + "\n";
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::string text;
    if (config.command == "run") text = cmd_run(config);
    else if (config.command == "steer") text = cmd_steer(config);
    else if (config.command == "sweep") text = cmd_sweep(config);
    else if (config.command == "report") text = cmd_report(config);
    else throw UsageError("unknown command '" + config.command + "'");
    emit(config, text, out);
    return kOk;
  } catch (const ParseError& e) {
    err << (config.input ? *config.input + ":" : std::string()) << e.what() << "\n";
    return kParseFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BadParameters ? kUsageFailure : kPhysicsFailure;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsageFailure;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon steering simulator"};
  app.require_subcommand(1);
  RunConfig config;
  std::string settings;

  auto add_common = [&](CLI::App* sub, bool sources) {
    if (sources) {
      sub->add_option("--input", config.input, "Circuit text or state JSON");
      sub->add_option("--preset", config.preset, "eq1, twc, hardy[:q,r], qplate_tripartite, noisy:v");
    }
    sub->add_option("--out", config.out, "Output file (default stdout)");
    sub->add_option("--format", config.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", config.seed, "Generator seed");
  };

  auto* run = app.add_subcommand("run", "Run a circuit or preset and print the state");
  add_common(run, true);

  auto* steer = app.add_subcommand("steer", "Assemblage, CJWR, CHSH and LHS test");
  add_common(steer, true);
  steer->add_option("--settings", settings, "Alice's qubit bases, e.g. Z,X");
  steer->add_option("--grid", config.grid, "Bloch grid resolution n (n^2 points)");

  auto* sweep = app.add_subcommand("sweep", "Visibility sweep of the noisy preset as CSV");
  add_common(sweep, false);
  sweep->add_option("--sweep", config.sweep, "Swept parameter (v)");
  sweep->add_option("--range", config.range, "lo:hi");
  sweep->add_option("--step", config.step, "Step size");
  sweep->add_option("--settings", settings, "Alice's qubit bases, e.g. Z,X");
  sweep->add_option("--grid", config.grid, "Bloch grid resolution n (n^2 points)");

  auto* report = app.add_subcommand("report", "Born table and conditional states of a preset");
  add_common(report, true);
  report->add_option("--settings", settings, "Measurement choices, e.g. NY:Z,pol:X");
  report->add_option("--samples", config.samples, "Monte-Carlo draws per setting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageFailure;
  }
  for (auto* sub : {run, steer, sweep, report})
    if (sub->parsed()) config.command = sub->get_name();
  config.settings = split(settings, ',');
  return execute(config, out, err);
}

}  // namespace qsteer::cli
