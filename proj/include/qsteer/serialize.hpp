#pragma once

#include <variant>

#include <json.hpp>

#include "qsteer/scenarios.hpp"
#include "qsteer/steering.hpp"

namespace qsteer {

using Json = nlohmann::ordered_json;

// Complex numbers are [re, im]; matrices are row-major nested arrays.

Json complex_to_json(Complex z);
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// {sites, oam, basis, amplitudes: [{ket, value}], norm}; zero amplitudes
/// are omitted.
Json state_to_json(const StateVector& s);
/// {sites, oam, basis, matrix, trace}.
Json density_to_json(const DensityOperator& rho);

/// Reads either form back. Throws ParseError (SyntaxError) on malformed
/// documents and Error on physically invalid content.
std::variant<StateVector, DensityOperator> state_from_json(const Json& j);

Json assemblage_to_json(const Assemblage& a);
Json chsh_to_json(const ChshResult& r);
Json verdict_to_json(const SteeringVerdict& v);
Json report_to_json(const ScenarioReport& r);

}  // namespace qsteer
