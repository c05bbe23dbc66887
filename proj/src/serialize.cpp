#include "qsteer/serialize.hpp"

#include "qsteer/circuit.hpp"
#include "qsteer/errors.hpp"

namespace qsteer {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw ParseError(ParseErrorKind::SyntaxError, 0, 0, "state JSON", what);
}

Json basis_labels(const BasisDecl& decl) {
  Json labels = Json::array();
  for (const auto& k : decl.kets()) labels.push_back(k.label());
  return labels;
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    malformed("complex numbers must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

BasisDecl decl_from_json(const Json& j) {
  if (!j.contains("sites") || !j["sites"].is_array()) malformed("missing 'sites' array");
  std::vector<std::string> sites;
  for (const auto& s : j["sites"]) {
    if (!s.is_string()) malformed("site names must be strings");
    sites.push_back(s.get<std::string>());
  }
  std::vector<int> oam{0};
  if (j.contains("oam")) {
    if (!j["oam"].is_array()) malformed("'oam' must be an array");
    oam.clear();
    for (const auto& m : j["oam"]) {
      if (!m.is_number_integer()) malformed("OAM values must be integers");
      oam.push_back(m.get<int>());
    }
  }
  return BasisDecl(std::move(sites), std::move(oam));
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) malformed("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) malformed("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json state_to_json(const StateVector& s) {
  Json j;
  j["sites"] = s.decl().sites();
  j["oam"] = s.decl().oam_values();
  j["basis"] = basis_labels(s.decl());
  Json amps = Json::array();
  for (const auto& [ket, value] : s.terms()) amps.push_back({{"ket", ket.label()}, {"value", complex_to_json(value)}});
  j["amplitudes"] = std::move(amps);
  j["norm"] = s.norm();
  return j;
}

Json density_to_json(const DensityOperator& rho) {
  Json j;
  if (rho.decl()) {
    j["sites"] = rho.decl()->sites();
    j["oam"] = rho.decl()->oam_values();
  }
  j["basis"] = rho.labels();
  j["matrix"] = matrix_to_json(rho.matrix());
  j["trace"] = rho.trace();
  return j;
}

std::variant<StateVector, DensityOperator> state_from_json(const Json& j) {
  if (!j.is_object()) malformed("document must be an object");
  const auto decl = decl_from_json(j);
  if (j.contains("matrix")) {
    CMatrix m = matrix_from_json(j["matrix"]);
    if (m.rows() != static_cast<Eigen::Index>(decl.dimension()))
      throw Error(ErrorKind::DimensionMismatch, "matrix size does not match the declared basis");
    return DensityOperator::over(decl, std::move(m));
  }
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) malformed("missing 'amplitudes' array");
  CVector amp = CVector::Zero(static_cast<Eigen::Index>(decl.dimension()));
  for (const auto& entry : j["amplitudes"]) {
    if (!entry.is_object() || !entry.contains("ket") || !entry["ket"].is_string() || !entry.contains("value"))
      malformed("amplitude entries must be {ket, value}");
    const auto ket = BasisKet::from_label(entry["ket"].get<std::string>());
    if (!ket) malformed("bad ket label '" + entry["ket"].get<std::string>() + "'");
    amp(static_cast<Eigen::Index>(decl.index_of(*ket))) += complex_from_json(entry["value"]);
  }
  return StateVector(decl, std::move(amp));
}

Json assemblage_to_json(const Assemblage& a) {
  Json settings = Json::array();
  for (const auto& s : a.settings) {
    Json members = Json::array();
    for (std::size_t k = 0; k < s.labels.size(); ++k)
      members.push_back({{"outcome", s.labels[k]}, {"member", matrix_to_json(s.members[k])}});
    settings.push_back({{"setting", s.name}, {"members", std::move(members)}});
  }
  return {{"bob_register", a.bob_register}, {"settings", std::move(settings)}};
}

Json chsh_to_json(const ChshResult& r) {
  return {{"value", r.value}, {"angles_deg", r.angles_deg}, {"correlators", r.correlators}};
}

Json verdict_to_json(const SteeringVerdict& v) {
  Json j{{"lhs_verdict", to_string(v.status)}, {"grid_n", v.grid_size}, {"residual", v.residual}};
  if (v.status == LhsStatus::UnsteerableCertified) {
    Json cert = Json::array();
    for (const auto& c : v.certificate)
      cert.push_back({{"strategy", c.strategy}, {"bloch", c.bloch}, {"weight", c.weight}});
    j["certificate"] = std::move(cert);
  }
  return j;
}

Json report_to_json(const ScenarioReport& r) {
  Json j;
  j["preset"] = r.preset;
  j["alice_register"] = r.alice_register;
  j["bob_register"] = r.bob_register;
  j["bob_reduced"] = matrix_to_json(r.bob_reduced);
  Json settings = Json::array();
  for (const auto& s : r.settings) {
    Json outcomes = Json::array();
    for (const auto& o : s.outcomes) {
      Json e{{"label", o.label}, {"probability", o.probability}};
      if (o.conditional_state) e["conditional_state"] = state_to_json(*o.conditional_state);
      if (o.conditional) e["conditional_state"] = density_to_json(*o.conditional);
      if (o.bob_state) e["bob_state"] = matrix_to_json(*o.bob_state);
      if (o.path_state) e["path_state"] = matrix_to_json(*o.path_state);
      if (o.samples) e["samples"] = *o.samples;
      outcomes.push_back(std::move(e));
    }
    settings.push_back({{"choice", s.choice}, {"name", s.name}, {"scope", s.scope}, {"outcomes", std::move(outcomes)}});
  }
  j["settings"] = std::move(settings);
  j["no_signaling_residual"] = r.no_signaling_residual;
  j["cjwr"] = r.cjwr ? Json(*r.cjwr) : Json(nullptr);
  j["chsh"] = r.chsh ? chsh_to_json(*r.chsh) : Json(nullptr);
  if (r.seed) {
    j["seed"] = *r.seed;
    j["samples"] = r.sample_count;
  }
  return j;
}

}  // namespace qsteer
