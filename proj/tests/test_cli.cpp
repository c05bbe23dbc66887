#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qsteer/cli.hpp"
#include "qsteer/serialize.hpp"

using namespace qsteer;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qsteer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(QSTEER_CORPUS_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qsteer_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run prints the state as JSON") {
    const auto r = run({"run", "--input", corpus("fig1.table")});
    REQUIRE(r.code == cli::kOk);
    const auto j = Json::parse(r.out);
    CHECK(j["amplitudes"].size() == 2);
    CHECK(j["norm"].get<double>() == doctest::Approx(1.0));
    const auto p = run({"run", "--preset", "noisy:0.5"});
    CHECK(p.code == cli::kOk);
    CHECK(Json::parse(p.out).contains("matrix"));
    const auto csv = run({"run", "--preset", "eq1", "--format", "csv"});
    CHECK(csv.out.rfind("ket,re,im\n", 0) == 0);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"run", "--input", corpus("bad/undeclared.table")}).code == cli::kParseFailure);
    const auto parse = run({"run", "--input", corpus("bad/unknown.table")});
    CHECK(parse.err.find("line 2") != std::string::npos);
    CHECK(run({"run", "--input", corpus("bad/oam_range_run.table")}).code == cli::kPhysicsFailure);
    CHECK(run({"run"}).code == cli::kUsageFailure);
    CHECK(run({"run", "--preset", "eq1", "--input", corpus("fig1.table")}).code == cli::kUsageFailure);
    CHECK(run({"run", "--bogus"}).code == cli::kUsageFailure);
    CHECK(run({"run", "--preset", "nope"}).code == cli::kUsageFailure);
    CHECK(run({"run", "--input", corpus("missing.table")}).code == cli::kUsageFailure);
    CHECK(run({"steer", "--preset", "eq1", "--settings", "Z,W"}).code == cli::kUsageFailure);
    CHECK(run({"steer", "--preset", "eq1", "--grid", "3"}).code == cli::kPhysicsFailure);
    CHECK(run({"sweep", "--range", "0:2"}).code == cli::kUsageFailure);
    CHECK(run({"sweep", "--step", "0"}).code == cli::kUsageFailure);

    const auto bad_json = scratch("bad.json");
    { std::ofstream(bad_json) << "{ \"sites\": [\"a\"], "; }
    CHECK(run({"run", "--input", bad_json.string()}).code == cli::kParseFailure);
    std::filesystem::remove(bad_json);
  }

  TEST_CASE("run output reads back within 1e-12") {
    const auto first = run({"run", "--input", corpus("tripartite.table")});
    REQUIRE(first.code == 0);
    const auto path = scratch("state.json");
    { std::ofstream(path) << first.out; }
    const auto original = std::get<StateVector>(state_from_json(Json::parse(first.out)));
    const auto again = run({"run", "--input", path.string()});
    REQUIRE(again.code == 0);
    const auto back = std::get<StateVector>(state_from_json(Json::parse(again.out)));
    CHECK((back.amplitudes() - original.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(again.out == first.out);
    std::filesystem::remove(path);

    const auto mixed = run({"run", "--preset", "noisy:0.3"});
    const auto rho = std::get<DensityOperator>(state_from_json(Json::parse(mixed.out)));
    CHECK((rho.matrix() - preset_density(PresetId::noisy(0.3)).matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("steer is deterministic and reports the verdict") {
    const auto a = run({"steer", "--preset", "noisy:0.4", "--settings", "Z,X", "--grid", "20"});
    const auto b = run({"steer", "--preset", "noisy:0.4", "--settings", "Z,X", "--grid", "20"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = Json::parse(a.out);
    CHECK(j["lhs_verdict"] == "UnsteerableCertified");
    CHECK(j["grid_n"] == 20);
    CHECK(j.contains("certificate"));
    const auto e = Json::parse(run({"steer", "--input", corpus("fig1.table"), "--grid", "10"}).out);
    CHECK(e["lhs_verdict"] == "NoLHSFoundAtResolution");
    CHECK(e["cjwr"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("sweep writes CSV rows") {
    const auto r = run({"sweep", "--range", "0:1", "--step", "0.25", "--grid", "10"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "v,cjwr,chsh_opt,lhs_verdict");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 5);
    CHECK(r.out == run({"sweep", "--range", "0:1", "--step", "0.25", "--grid", "10"}).out);
  }

  TEST_CASE("report and --out") {
    const auto path = scratch("report.json");
    const auto r = run({"report", "--preset", "eq1", "--settings", "NY:Z,pol:X", "--seed", "3", "--samples", "100",
                        "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto j = Json::parse(oracle::read_file(path.string()));
    CHECK(j["settings"].size() == 2);
    CHECK(j["seed"] == 3);
    std::filesystem::remove(path);
  }
}
