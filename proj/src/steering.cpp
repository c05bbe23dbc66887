#include "qsteer/steering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsteer/errors.hpp"
#include "qsteer/optics.hpp"
#include "qsteer/simplex.hpp"

namespace qsteer {

SteeringSetup SteeringSetup::rail(const std::string& alice_site, const std::string& bob_site) {
  return {QubitRegister::polarization(), QubitRegister::dual_rail(alice_site, bob_site),
          QubitRegister::dual_rail(bob_site, alice_site)};
}

SteeringSetup SteeringSetup::occupation(const std::string& alice_site, const std::string& bob_site) {
  return {QubitRegister::occupation(alice_site), QubitRegister::occupation(bob_site),
          QubitRegister::occupation(bob_site)};
}

std::string_view to_string(QubitBasis basis) {
  switch (basis) {
    case QubitBasis::Z: return "Z";
    case QubitBasis::X: return "X";
    case QubitBasis::Y: return "Y";
  }
  return "?";
}

QubitBasis parse_qubit_basis(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'Z': return QubitBasis::Z;
      case 'X': return QubitBasis::X;
      case 'Y': return QubitBasis::Y;
      default: break;
    }
  }
  throw Error(ErrorKind::BadParameters, "unknown qubit basis '" + std::string(text) + "' (expected Z, X or Y)");
}

CMatrix pauli_of(QubitBasis basis) {
  switch (basis) {
    case QubitBasis::Z: return pauli::z();
    case QubitBasis::X: return pauli::x();
    case QubitBasis::Y: return pauli::y();
  }
  return pauli::identity();
}

QubitSetting qubit_setting(const QubitRegister& reg, QubitBasis basis) {
  const double h = std::numbers::sqrt2 / 2.0;
  const Complex i(0, 1);
  QubitSetting out{std::string(to_string(basis)), {}};
  const bool pol = reg.kind() == QubitRegister::Kind::Polarization;
  switch (basis) {
    case QubitBasis::Z:
      out.outcomes = {{pol ? "H-click" : "0", Eigen::Vector2cd(1, 0)}, {pol ? "V-click" : "1", Eigen::Vector2cd(0, 1)}};
      break;
    case QubitBasis::X:
      if (pol)
        out.outcomes = {{"+", Eigen::Vector2cd(h, h)}, {"-", Eigen::Vector2cd(-h, h)}};
      else
        out.outcomes = {{"+", Eigen::Vector2cd(h, h)}, {"-", Eigen::Vector2cd(h, -h)}};
      break;
    case QubitBasis::Y:
      if (pol)
        out.outcomes = {{"L", left_circular()}, {"R", right_circular()}};
      else
        out.outcomes = {{"+i", Eigen::Vector2cd(h, i * h)}, {"-i", Eigen::Vector2cd(h, -i * h)}};
      break;
  }
  return out;
}

const CMatrix& Assemblage::member(std::string_view setting, std::string_view label) const {
  for (const auto& s : settings) {
    if (s.name != setting) continue;
    for (std::size_t a = 0; a < s.labels.size(); ++a)
      if (s.labels[a] == label) return s.members[a];
    throw Error(ErrorKind::UnknownOutcome, "setting '" + s.name + "' has no outcome '" + std::string(label) + "'");
  }
  throw Error(ErrorKind::UnknownOutcome, "no setting '" + std::string(setting) + "' in assemblage");
}

CMatrix Assemblage::marginal(std::size_t x) const {
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& m : settings.at(x).members) sum += m;
  return sum;
}

double no_signaling_residual(const Assemblage& asm_) {
  double worst = 0.0;
  if (asm_.settings.empty()) return worst;
  const CMatrix first = asm_.marginal(0);
  for (std::size_t x = 1; x < asm_.settings.size(); ++x)
    worst = std::max(worst, (asm_.marginal(x) - first).cwiseAbs().maxCoeff());
  return worst;
}

Assemblage compute_assemblage(const DensityOperator& rho, const SteeringSetup& setup,
                              std::span<const QubitBasis> bases) {
  const CMatrix rho2 = qubit_pair(rho, setup.alice, setup.bob);
  Assemblage out{setup.bob.describe(), {}};
  for (QubitBasis basis : bases) {
    const auto setting = qubit_setting(setup.alice, basis);
    AssemblageSetting entry{setting.name, {}, {}};
    for (const auto& [label, e] : setting.outcomes) {
      CMatrix m = CMatrix::Zero(2, 2);
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap) m(b, bp) += std::conj(e(a)) * rho2(2 * a + b, 2 * ap + bp) * e(ap);
      entry.labels.push_back(label);
      entry.members.push_back(std::move(m));
    }
    out.settings.push_back(std::move(entry));
  }
  return out;
}

Assemblage compute_assemblage(const StateVector& s, const SteeringSetup& setup, std::span<const QubitBasis> bases) {
  return compute_assemblage(to_density(s), setup, bases);
}

Assemblage compute_assemblage(const DensityOperator& rho, const QubitRegister& bob,
                              std::span<const MeasurementSetting> settings) {
  Assemblage out{bob.describe(), {}};
  for (const auto& setting : settings) {
    AssemblageSetting entry{setting.name() + (setting.site() ? "@" + *setting.site() : std::string()), {}, {}};
    for (const auto& rec : born_probabilities(rho, setting)) {
      entry.labels.push_back(rec.label);
      entry.members.push_back(rec.conditional ? CMatrix(rec.probability * single_qubit(*rec.conditional, bob))
                                              : CMatrix(CMatrix::Zero(2, 2)));
    }
    out.settings.push_back(std::move(entry));
  }
  return out;
}

CMatrix inequality_state(const DensityOperator& rho, const SteeringSetup& setup) {
  return qubit_pair(rho, setup.alice, setup.bob_path);
}

namespace {

void require_dichotomic(const CMatrix& o) {
  if (o.rows() != 2 || o.cols() != 2)
    throw Error(ErrorKind::NonDichotomicObservable, "observable is not a qubit operator");
  if (!is_hermitian(o) || (o * o - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kAlgebraTol ||
      std::abs(o.trace()) > kAlgebraTol)
    throw Error(ErrorKind::NonDichotomicObservable, "observable does not have eigenvalues +1 and -1");
}

}  // namespace

double cjwr_value(const CMatrix& rho2, std::span<const std::pair<CMatrix, CMatrix>> pairs) {
  if (pairs.size() != 2 && pairs.size() != 3)
    throw Error(ErrorKind::BadParameters, "CJWR needs 2 or 3 observable pairs, got " + std::to_string(pairs.size()));
  if (rho2.rows() != 4 || rho2.cols() != 4)
    throw Error(ErrorKind::DimensionMismatch, "CJWR needs a two-qubit operator");
  Complex sum = 0.0;
  for (const auto& [a, b] : pairs) {
    require_dichotomic(a);
    require_dichotomic(b);
    sum += (rho2 * kron(a, b)).trace();
  }
  return std::abs(sum.real()) / std::sqrt(static_cast<double>(pairs.size()));
}

std::vector<std::pair<CMatrix, CMatrix>> cjwr_pairs(std::span<const QubitBasis> bases) {
  std::vector<std::pair<CMatrix, CMatrix>> out;
  for (QubitBasis b : bases) {
    const CMatrix p = pauli_of(b);
    out.emplace_back(p, p.conjugate());
  }
  return out;
}

double correlator(const CMatrix& rho2, double a_deg, double b_deg) {
  const CMatrix a = cos_deg(a_deg) * pauli::z() + sin_deg(a_deg) * pauli::x();
  const CMatrix b = cos_deg(b_deg) * pauli::z() + sin_deg(b_deg) * pauli::x();
  return (rho2 * kron(a, b)).trace().real();
}

ChshResult chsh_value(const CMatrix& rho2, double a0, double a1, double b0, double b1) {
  if (rho2.rows() != 4 || rho2.cols() != 4)
    throw Error(ErrorKind::DimensionMismatch, "CHSH needs a two-qubit operator");
  ChshResult r;
  r.angles_deg = {a0, a1, b0, b1};
  r.correlators = {correlator(rho2, a0, b0), correlator(rho2, a0, b1), correlator(rho2, a1, b0),
                   correlator(rho2, a1, b1)};
  r.value = r.correlators[0] - r.correlators[1] + r.correlators[2] + r.correlators[3];
  return r;
}

ChshResult chsh_optimize(const CMatrix& rho2, double step_deg) {
  const double count_f = 360.0 / step_deg;
  const auto k = static_cast<std::size_t>(std::llround(count_f));
  if (!(step_deg > 0.0) || k == 0 || std::abs(count_f - static_cast<double>(k)) > 1e-9)
    throw Error(ErrorKind::BadParameters, "grid step must divide 360 degrees");
  std::vector<double> angle(k);
  for (std::size_t i = 0; i < k; ++i) angle[i] = static_cast<double>(i) * step_deg;
  // E(a,b) is bilinear in (cos, sin) of each angle: contract the Z/X
  // correlation tensor instead of forming every observable.
  const CMatrix zx[2] = {pauli::z(), pauli::x()};
  double tensor[2][2];
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) tensor[p][q] = (rho2 * kron(zx[p], zx[q])).trace().real();
  Eigen::MatrixXd e(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double ca = cos_deg(angle[i]), sa = sin_deg(angle[i]);
    for (std::size_t j = 0; j < k; ++j) {
      const double cb = cos_deg(angle[j]), sb = sin_deg(angle[j]);
      e(i, j) = ca * cb * tensor[0][0] + ca * sb * tensor[0][1] + sa * cb * tensor[1][0] + sa * sb * tensor[1][1];
    }
  }

  // S separates: [E(a0,b0) + E(a1,b0)] + [E(a1,b1) - E(a0,b1)].
  double best = -std::numeric_limits<double>::infinity();
  std::array<std::size_t, 4> arg{};
  for (std::size_t a0 = 0; a0 < k; ++a0)
    for (std::size_t a1 = 0; a1 < k; ++a1) {
      std::size_t b0 = 0, b1 = 0;
      double s0 = -std::numeric_limits<double>::infinity(), s1 = s0;
      for (std::size_t b = 0; b < k; ++b) {
        const double plus = e(a0, b) + e(a1, b);
        const double minus = e(a1, b) - e(a0, b);
        if (plus > s0 + 1e-12) s0 = plus, b0 = b;
        if (minus > s1 + 1e-12) s1 = minus, b1 = b;
      }
      if (s0 + s1 > best + 1e-12) {
        best = s0 + s1;
        arg = {a0, a1, b0, b1};
      }
    }
  return chsh_value(rho2, angle[arg[0]], angle[arg[1]], angle[arg[2]], angle[arg[3]]);
}

std::string_view to_string(LhsStatus status) {
  return status == LhsStatus::UnsteerableCertified ? "UnsteerableCertified" : "NoLHSFoundAtResolution";
}

std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t count) {
  std::vector<std::array<double, 3>> pts;
  pts.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

namespace {

CMatrix bloch_projector(const std::array<double, 3>& n) {
  CMatrix p(2, 2);
  p << (1.0 + n[2]) / 2.0, Complex(n[0], -n[1]) / 2.0, Complex(n[0], n[1]) / 2.0, (1.0 - n[2]) / 2.0;
  return p;
}

double max_deviation(const Assemblage& a, const Assemblage& b) {
  double worst = 0.0;
  for (std::size_t x = 0; x < a.settings.size(); ++x)
    for (std::size_t k = 0; k < a.settings[x].members.size(); ++k)
      worst = std::max(worst, (a.settings[x].members[k] - b.settings[x].members[k]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

Assemblage replay_certificate(const Assemblage& shape, std::span<const LhsComponent> certificate) {
  Assemblage out = shape;
  for (auto& s : out.settings)
    for (auto& m : s.members) m = CMatrix::Zero(2, 2);
  for (const auto& c : certificate) {
    if (c.strategy.size() != out.settings.size())
      throw Error(ErrorKind::DimensionMismatch, "certificate strategy does not match the settings");
    const CMatrix p = c.weight * bloch_projector(c.bloch);
    for (std::size_t x = 0; x < out.settings.size(); ++x) out.settings[x].members.at(c.strategy[x]) += p;
  }
  return out;
}

SteeringVerdict lhs_feasibility(const Assemblage& asm_, std::size_t grid_n) {
  if (grid_n < 6) throw Error(ErrorKind::GridTooCoarse, "grid_n must be at least 6, got " + std::to_string(grid_n));
  const std::size_t m = asm_.settings.size();
  if (m > 4) throw Error(ErrorKind::TooManySettings, "at most 4 settings, got " + std::to_string(m));
  if (m == 0) throw Error(ErrorKind::BadParameters, "assemblage has no settings");

  std::vector<std::size_t> offset(m), counts(m);
  std::size_t members = 0, strategies = 1;
  for (std::size_t x = 0; x < m; ++x) {
    counts[x] = asm_.settings[x].members.size();
    if (counts[x] == 0) throw Error(ErrorKind::BadParameters, "setting without outcomes");
    offset[x] = members;
    members += counts[x];
    strategies *= counts[x];
  }
  const auto points = fibonacci_sphere(grid_n * grid_n);
  const std::size_t g_count = points.size();

  const auto rows = static_cast<Eigen::Index>(4 * members);
  const auto cols = static_cast<Eigen::Index>(strategies * g_count);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b(rows);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t k = 0; k < counts[x]; ++k) {
      const CMatrix& s = asm_.settings[x].members[k];
      if (s.rows() != 2 || s.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "members must be 2x2");
      const auto r = static_cast<Eigen::Index>(4 * (offset[x] + k));
      b.segment(r, 4) << s(0, 0).real(), s(1, 1).real(), s(0, 1).real(), s(0, 1).imag();
    }

  std::vector<std::vector<std::size_t>> strategy(strategies, std::vector<std::size_t>(m));
  for (std::size_t l = 0; l < strategies; ++l) {
    std::size_t rest = l;
    for (std::size_t x = 0; x < m; ++x) {
      strategy[l][x] = rest % counts[x];
      rest /= counts[x];
    }
    for (std::size_t g = 0; g < g_count; ++g) {
      const auto& n = points[g];
      const auto col = static_cast<Eigen::Index>(l * g_count + g);
      for (std::size_t x = 0; x < m; ++x) {
        const auto r = static_cast<Eigen::Index>(4 * (offset[x] + strategy[l][x]));
        a(r, col) = (1.0 + n[2]) / 2.0;
        a(r + 1, col) = (1.0 - n[2]) / 2.0;
        a(r + 2, col) = n[0] / 2.0;
        a(r + 3, col) = -n[1] / 2.0;
      }
    }
  }

  const auto lp_result = lp::find_feasible_point(a, b);
  SteeringVerdict verdict;
  verdict.grid_size = grid_n;
  if (!lp_result.feasible) {
    verdict.residual = lp_result.infeasibility;
    return verdict;
  }
  std::vector<LhsComponent> cert;
  for (Eigen::Index col = 0; col < cols; ++col) {
    const double w = lp_result.x(col);
    if (w <= 0.0) continue;
    const auto l = static_cast<std::size_t>(col) / g_count;
    const auto g = static_cast<std::size_t>(col) % g_count;
    cert.push_back({strategy[l], points[g], w});
  }
  verdict.residual = max_deviation(replay_certificate(asm_, cert), asm_);
  if (verdict.residual < 1e-7) {
    verdict.status = LhsStatus::UnsteerableCertified;
    verdict.certificate = std::move(cert);
  }
  return verdict;
}

}  // namespace qsteer
