#include "qsteer/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

#include "qsteer/errors.hpp"
#include "qsteer/optics.hpp"

namespace qsteer {

std::string_view keyword(ElementKind kind) {
  switch (kind) {
    case ElementKind::Source: return "source";
    case ElementKind::Hwp: return "hwp";
    case ElementKind::Qwp: return "qwp";
    case ElementKind::Pbs: return "pbs";
    case ElementKind::Bs: return "bs";
    case ElementKind::Qplate: return "qplate";
    case ElementKind::Phase: return "phase";
  }
  return "?";
}

bool ElementSpec::operator==(const ElementSpec& other) const {
  return kind == other.kind && sites == other.sites && pol == other.pol && angle_deg == other.angle_deg &&
         q == other.q;
}

bool Circuit::operator==(const Circuit& other) const {
  return sites == other.sites && oam == other.oam && oam_declared == other.oam_declared &&
         elements == other.elements;
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UnknownElement: return "UnknownElement";
    case ParseErrorKind::UndeclaredSite: return "UndeclaredSite";
    case ParseErrorKind::ArityError: return "ArityError";
    case ParseErrorKind::OamRangeError: return "OamRangeError";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string expected,
                       const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + (column ? ":" + std::to_string(column) : "") + ": " +
                         std::string(to_string(kind)) + ": " + message +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      kind_(kind),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

bool is_identifier(std::string_view t) {
  if (t.empty() || !is_ident_start(t.front())) return false;
  return std::all_of(t.begin() + 1, t.end(), is_ident_char);
}

std::optional<double> parse_double(std::string_view t) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view t) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  int value = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

class LineParser {
 public:
  explicit LineParser(Circuit& circuit) : c_(circuit) {}

  void parse_line(std::string_view raw, std::size_t line_no) {
    line_ = line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    tokens_.clear();
    std::size_t i = 0;
    while (i < raw.size()) {
      const char ch = raw[i];
      if (ch == ' ' || ch == '\t') {
        ++i;
        continue;
      }
      const auto start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') {
        const auto u = static_cast<unsigned char>(raw[i]);
        if (u < 0x21 || u > 0x7e)
          fail(ParseErrorKind::SyntaxError, i + 1, "printable ASCII", "unexpected byte in statement");
        ++i;
      }
      tokens_.push_back({raw.substr(start, i - start), start + 1});
    }
    if (tokens_.empty()) return;

    const auto head = tokens_.front().text;
    if (head == "sites") return parse_sites();
    if (head == "oam") return parse_oam();
    if (head == "source") return parse_source();
    if (head == "hwp") return parse_angle(ElementKind::Hwp);
    if (head == "qwp") return parse_angle(ElementKind::Qwp);
    if (head == "phase") return parse_angle(ElementKind::Phase);
    if (head == "pbs") return parse_pbs();
    if (head == "bs") return parse_bs();
    if (head == "qplate") return parse_qplate();
    if (is_identifier(head))
      fail(ParseErrorKind::UnknownElement, tokens_.front().column, "statement keyword",
           "unknown element '" + std::string(head) + "'");
    fail(ParseErrorKind::SyntaxError, tokens_.front().column, "statement keyword", "malformed statement");
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, std::size_t column, std::string expected, const std::string& msg) {
    throw ParseError(kind, line_, column, std::move(expected), msg);
  }

  void expect_arity(std::size_t operands, std::string_view form) {
    const auto got = tokens_.size() - 1;
    if (got != operands) {
      const auto column = got > operands ? tokens_[operands + 1].column : 0;
      fail(ParseErrorKind::ArityError, column, std::string(form),
           std::string(tokens_.front().text) + " takes " + std::to_string(operands) + " operand(s), got " +
               std::to_string(got));
    }
  }

  std::string site_operand(const Token& t) {
    if (!is_identifier(t.text)) fail(ParseErrorKind::SyntaxError, t.column, "site identifier", "bad site name");
    const std::string name(t.text);
    if (std::find(c_.sites.begin(), c_.sites.end(), name) == c_.sites.end())
      fail(ParseErrorKind::UndeclaredSite, t.column, "declared site", "site '" + name + "' is not declared");
    return name;
  }

  double angle_operand(const Token& t) {
    auto v = parse_double(t.text);
    if (!v) fail(ParseErrorKind::SyntaxError, t.column, "angle in degrees", "bad number '" + std::string(t.text) + "'");
    return *v;
  }

  ElementSpec start(ElementKind kind) {
    ElementSpec e;
    e.kind = kind;
    e.line = line_;
    return e;
  }

  void parse_sites() {
    for (std::size_t k = 1; k < tokens_.size(); ++k) {
      const auto& t = tokens_[k];
      if (!is_identifier(t.text)) fail(ParseErrorKind::SyntaxError, t.column, "site identifier", "bad site name");
      std::string name(t.text);
      if (std::find(c_.sites.begin(), c_.sites.end(), name) != c_.sites.end())
        fail(ParseErrorKind::SyntaxError, t.column, "new site identifier", "site '" + name + "' declared twice");
      c_.sites.push_back(std::move(name));
    }
  }

  void parse_oam() {
    if (c_.oam_declared)
      fail(ParseErrorKind::SyntaxError, tokens_.front().column, "single oam declaration", "oam declared twice");
    if (!c_.elements.empty())
      fail(ParseErrorKind::SyntaxError, tokens_.front().column, "oam declaration before the first element",
           "oam declared after elements");
    if (tokens_.size() < 2)
      fail(ParseErrorKind::ArityError, 0, "oam <int>+", "oam needs at least one value");
    std::vector<int> values;
    for (std::size_t k = 1; k < tokens_.size(); ++k) {
      auto v = parse_int(tokens_[k].text);
      if (!v) fail(ParseErrorKind::SyntaxError, tokens_[k].column, "integer", "bad OAM value");
      if (std::find(values.begin(), values.end(), *v) != values.end())
        fail(ParseErrorKind::SyntaxError, tokens_[k].column, "distinct integers", "OAM value listed twice");
      values.push_back(*v);
    }
    c_.oam = std::move(values);
    c_.oam_declared = true;
  }

  void parse_source() {
    expect_arity(2, "source <site> <H|V>");
    auto e = start(ElementKind::Source);
    e.sites.push_back(site_operand(tokens_[1]));
    const auto p = tokens_[2].text;
    if (p != "H" && p != "V") fail(ParseErrorKind::SyntaxError, tokens_[2].column, "H or V", "bad polarization");
    e.pol = p == "H" ? Pol::H : Pol::V;
    if (std::find(c_.oam.begin(), c_.oam.end(), 0) == c_.oam.end())
      fail(ParseErrorKind::OamRangeError, tokens_.front().column, "OAM 0 in the oam declaration",
           "source emits OAM 0, which is not declared");
    c_.elements.push_back(std::move(e));
  }

  void parse_angle(ElementKind kind) {
    expect_arity(2, std::string(keyword(kind)) + " <site> <deg>");
    auto e = start(kind);
    e.sites.push_back(site_operand(tokens_[1]));
    e.angle_deg = angle_operand(tokens_[2]);
    c_.elements.push_back(std::move(e));
  }

  void parse_pbs() {
    if (tokens_.size() >= 3 && tokens_[2].text != "->")
      fail(ParseErrorKind::SyntaxError, tokens_[2].column, "'->'", "pbs outputs must follow '->'");
    expect_arity(4, "pbs <site> -> <siteH> <siteV>");
    auto e = start(ElementKind::Pbs);
    e.sites = {site_operand(tokens_[1]), site_operand(tokens_[3]), site_operand(tokens_[4])};
    if (e.sites[1] == e.sites[2])
      fail(ParseErrorKind::ArityError, tokens_[4].column, "two distinct output sites", "pbs outputs coincide");
    c_.elements.push_back(std::move(e));
  }

  void parse_bs() {
    expect_arity(2, "bs <site> <site>");
    auto e = start(ElementKind::Bs);
    e.sites = {site_operand(tokens_[1]), site_operand(tokens_[2])};
    if (e.sites[0] == e.sites[1])
      fail(ParseErrorKind::ArityError, tokens_[2].column, "two distinct sites", "bs ports coincide");
    c_.elements.push_back(std::move(e));
  }

  void parse_qplate() {
    expect_arity(2, "qplate <site> q=<int>");
    auto e = start(ElementKind::Qplate);
    e.sites.push_back(site_operand(tokens_[1]));
    const auto& t = tokens_[2];
    std::optional<int> q;
    if (t.text.substr(0, 2) == "q=") q = parse_int(t.text.substr(2));
    if (!q) fail(ParseErrorKind::SyntaxError, t.column, "q=<int>", "bad q-plate charge");
    if (!c_.oam_declared)
      fail(ParseErrorKind::OamRangeError, tokens_.front().column, "an oam declaration before qplate",
           "qplate needs an explicit oam declaration");
    e.q = *q;
    c_.elements.push_back(std::move(e));
  }

  Circuit& c_;
  std::size_t line_ = 0;
  std::vector<Token> tokens_;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  LineParser parser(c);
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    parser.parse_line(text.substr(pos, nl - pos), line_no);
    pos = nl + 1;
    ++line_no;
  }
  return c;
}

std::string format_circuit(const Circuit& c) {
  std::string out = "sites";
  for (const auto& s : c.sites) out += ' ' + s;
  out += '\n';
  if (c.oam_declared) {
    out += "oam";
    for (int m : c.oam) out += ' ' + std::to_string(m);
    out += '\n';
  }
  for (const auto& e : c.elements) {
    out += keyword(e.kind);
    switch (e.kind) {
      case ElementKind::Source: out += ' ' + e.sites[0] + ' ' + to_char(e.pol); break;
      case ElementKind::Hwp:
      case ElementKind::Qwp:
      case ElementKind::Phase: out += ' ' + e.sites[0] + ' ' + format_number(e.angle_deg); break;
      case ElementKind::Pbs: out += ' ' + e.sites[0] + " -> " + e.sites[1] + ' ' + e.sites[2]; break;
      case ElementKind::Bs: out += ' ' + e.sites[0] + ' ' + e.sites[1]; break;
      case ElementKind::Qplate: out += ' ' + e.sites[0] + " q=" + std::to_string(e.q); break;
    }
    out += '\n';
  }
  return out;
}

namespace {

StateVector apply(const StateVector& s, const ElementSpec& e) {
  switch (e.kind) {
    case ElementKind::Source: return heralded_source(s, e.sites[0], e.pol);
    case ElementKind::Hwp: return waveplate(s, e.sites[0], WaveplateKind::Half, e.angle_deg);
    case ElementKind::Qwp: return waveplate(s, e.sites[0], WaveplateKind::Quarter, e.angle_deg);
    case ElementKind::Pbs: return pbs_route(s, e.sites[0], e.sites[1], e.sites[2]);
    case ElementKind::Bs: return beamsplitter_5050(s, e.sites[0], e.sites[1]);
    case ElementKind::Qplate: return qplate(s, e.sites[0], e.q);
    case ElementKind::Phase: return phase_shift(s, e.sites[0], e.angle_deg);
  }
  return s;
}

}  // namespace

StateVector run_circuit(const Circuit& c) {
  auto state = StateVector::vacuum(c.decl());
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    try {
      state = apply(state, c.elements[i]);
    } catch (const Error& err) {
      throw err.at_element(i);
    }
  }
  return state;
}

}  // namespace qsteer
