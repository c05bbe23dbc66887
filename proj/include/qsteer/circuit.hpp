#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsteer/state.hpp"

namespace qsteer {

enum class ElementKind { Source, Hwp, Qwp, Pbs, Bs, Qplate, Phase };

std::string_view keyword(ElementKind kind);

struct ElementSpec {
  ElementKind kind = ElementKind::Source;
  /// source/hwp/qwp/qplate/phase: {site}; pbs: {input, out_h, out_v};
  /// bs: {site1, site2}.
  std::vector<std::string> sites;
  Pol pol = Pol::H;        // source
  double angle_deg = 0.0;  // hwp, qwp, phase
  int q = 0;               // qplate
  std::size_t line = 0;    // diagnostics only, not part of equality

  bool operator==(const ElementSpec& other) const;
};

/// An optical table: declarations plus elements in propagation order.
struct Circuit {
  std::vector<std::string> sites;
  std::vector<int> oam{0};
  bool oam_declared = false;
  std::vector<ElementSpec> elements;

  BasisDecl decl() const { return BasisDecl(sites, oam); }
  bool operator==(const Circuit& other) const;
};

enum class ParseErrorKind { SyntaxError, UnknownElement, UndeclaredSite, ArityError, OamRangeError };

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string expected,
             const std::string& message);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  /// 1-based byte column; 0 when the error concerns the whole line.
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_, column_;
  std::string expected_;
};

/// Grammar, one statement per line, '#' starts a comment:
///   sites <id>*            oam <int>+
///   source <site> <H|V>    hwp|qwp|phase <site> <deg>
///   pbs <site> -> <siteH> <siteV>
///   bs <site> <site>       qplate <site> q=<int>
/// LF or CRLF line endings. Throws ParseError.
Circuit parse_circuit(std::string_view text);

/// Canonical text; parse_circuit(format_circuit(c)) == c.
std::string format_circuit(const Circuit& c);

/// Folds the elements over the vacuum. Element errors are rethrown with the
/// element index attached.
StateVector run_circuit(const Circuit& c);

}  // namespace qsteer
