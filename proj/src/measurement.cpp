#include "qsteer/measurement.hpp"

#include <random>

#include "qsteer/errors.hpp"
#include "qsteer/optics.hpp"

namespace qsteer {

std::string_view to_string(PolBasis basis) {
  switch (basis) {
    case PolBasis::ZHV: return "ZHV";
    case PolBasis::Xdiag: return "Xdiag";
    case PolBasis::Ycirc: return "Ycirc";
  }
  return "?";
}

std::string_view to_string(Scope scope) { return scope == Scope::AtSite ? "site" : "register"; }

MeasurementSetting::MeasurementSetting(BasisDecl decl, std::string name, std::optional<std::string> site,
                                       RegisterKind reg, Scope scope, std::vector<Outcome> outcomes,
                                       bool include_no_click)
    : decl_(std::move(decl)),
      name_(std::move(name)),
      site_(std::move(site)),
      reg_(reg),
      scope_(scope),
      outcomes_(std::move(outcomes)),
      include_no_click_(include_no_click) {
  const auto d = static_cast<Eigen::Index>(decl_.dimension());
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    const auto& p = outcomes_[i].projector;
    if (p.rows() != d || p.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "projector '" + outcomes_[i].label + "' has the wrong size");
    if (!is_hermitian(p) || (p * p - p).cwiseAbs().maxCoeff() > kAlgebraTol)
      throw Error(ErrorKind::BadParameters, "outcome '" + outcomes_[i].label + "' is not a projector");
    for (std::size_t j = 0; j < i; ++j) {
      if ((p * outcomes_[j].projector).cwiseAbs().maxCoeff() > kAlgebraTol)
        throw Error(ErrorKind::BadParameters, "outcomes '" + outcomes_[j].label + "' and '" + outcomes_[i].label +
                                                  "' are not orthogonal");
      if (outcomes_[j].label == outcomes_[i].label)
        throw Error(ErrorKind::BadParameters, "duplicate outcome label '" + outcomes_[i].label + "'");
    }
    total += p;
  }
  if ((total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kAlgebraTol)
    throw Error(ErrorKind::BadParameters, "outcome projectors of '" + name_ + "' are not complete");
}

const Outcome& MeasurementSetting::outcome(std::string_view label) const {
  for (const auto& o : outcomes_)
    if (o.label == label) return o;
  throw Error(ErrorKind::UnknownOutcome, "setting '" + name_ + "' has no outcome '" + std::string(label) + "'");
}

std::vector<std::string> MeasurementSetting::labels() const {
  std::vector<std::string> out;
  for (const auto& o : outcomes_) out.push_back(o.label);
  return out;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Appends I - sum(P) as the no-click outcome.
void add_no_click(const BasisDecl& decl, std::vector<Outcome>& outcomes) {
  const auto d = static_cast<Eigen::Index>(decl.dimension());
  CMatrix rest = CMatrix::Identity(d, d);
  for (const auto& o : outcomes) rest -= o.projector;
  outcomes.push_back({kNoClick, rest});
}

std::string signed_label(int m) { return m > 0 ? "+" + std::to_string(m) : std::to_string(m); }

}  // namespace

MeasurementSetting polarization_setting(const BasisDecl& decl, const std::string& site, PolBasis basis,
                                        Scope scope) {
  decl.site_position(site);
  std::vector<std::pair<std::string, Eigen::Vector2cd>> vecs;
  switch (basis) {
    case PolBasis::ZHV:
      vecs = {{"H-click", Eigen::Vector2cd(1, 0)}, {"V-click", Eigen::Vector2cd(0, 1)}};
      break;
    case PolBasis::Xdiag:
      vecs = {{"+", Eigen::Vector2cd(kInvSqrt2, kInvSqrt2)}, {"-", Eigen::Vector2cd(-kInvSqrt2, kInvSqrt2)}};
      break;
    case PolBasis::Ycirc: vecs = {{"L", left_circular()}, {"R", right_circular()}}; break;
  }
  const auto d = static_cast<Eigen::Index>(decl.dimension());
  std::vector<Outcome> outcomes;
  for (const auto& [label, e] : vecs) {
    CMatrix p = CMatrix::Zero(d, d);
    for (const auto& s : decl.sorted_sites()) {
      if (scope == Scope::AtSite && s != site) continue;
      for (int m : decl.oam_values()) {
        const auto h = static_cast<Eigen::Index>(decl.index_of(s, Pol::H, m));
        const auto v = static_cast<Eigen::Index>(decl.index_of(s, Pol::V, m));
        const Eigen::Index ix[2] = {h, v};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) p(ix[a], ix[b]) += e(a) * std::conj(e(b));
      }
    }
    outcomes.push_back({label, std::move(p)});
  }
  add_no_click(decl, outcomes);
  return MeasurementSetting(decl, std::string("pol:") + std::string(to_string(basis)), site,
                            RegisterKind::Polarization, scope, std::move(outcomes), true);
}

MeasurementSetting oam_setting(const BasisDecl& decl, int m0, int m1, PolBasis basis,
                               const std::optional<std::string>& site) {
  if (m0 == m1) throw Error(ErrorKind::BadParameters, "OAM analyzer needs two distinct values");
  const auto k0 = decl.oam_position(m0);
  const auto k1 = decl.oam_position(m1);
  if (site) decl.site_position(*site);
  const Complex i(0, 1);
  std::vector<std::pair<std::string, Eigen::Vector2cd>> vecs;
  switch (basis) {
    case PolBasis::ZHV:
      vecs = {{signed_label(m0), Eigen::Vector2cd(1, 0)}, {signed_label(m1), Eigen::Vector2cd(0, 1)}};
      break;
    case PolBasis::Xdiag:
      vecs = {{"+", Eigen::Vector2cd(kInvSqrt2, kInvSqrt2)}, {"-", Eigen::Vector2cd(kInvSqrt2, -kInvSqrt2)}};
      break;
    case PolBasis::Ycirc:
      vecs = {{"+i", Eigen::Vector2cd(kInvSqrt2, i * kInvSqrt2)}, {"-i", Eigen::Vector2cd(kInvSqrt2, -i * kInvSqrt2)}};
      break;
  }
  const auto d = static_cast<Eigen::Index>(decl.dimension());
  const auto& oam = decl.oam_values();
  std::vector<Outcome> outcomes;
  for (const auto& [label, e] : vecs) {
    CMatrix p = CMatrix::Zero(d, d);
    for (const auto& s : decl.sorted_sites()) {
      if (site && s != *site) continue;
      for (Pol pol : {Pol::H, Pol::V}) {
        const Eigen::Index ix[2] = {static_cast<Eigen::Index>(decl.index_of(s, pol, oam[k0])),
                                    static_cast<Eigen::Index>(decl.index_of(s, pol, oam[k1]))};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) p(ix[a], ix[b]) += e(a) * std::conj(e(b));
      }
    }
    outcomes.push_back({label, std::move(p)});
  }
  add_no_click(decl, outcomes);
  return MeasurementSetting(decl, std::string("oam:") + std::string(to_string(basis)), site, RegisterKind::Oam,
                            site ? Scope::AtSite : Scope::Register, std::move(outcomes), true);
}

MeasurementSetting presence_setting(const BasisDecl& decl, const std::string& site) {
  decl.site_position(site);
  const auto d = static_cast<Eigen::Index>(decl.dimension());
  CMatrix p = CMatrix::Zero(d, d);
  for (Pol pol : {Pol::H, Pol::V})
    for (int m : decl.oam_values()) {
      const auto k = static_cast<Eigen::Index>(decl.index_of(site, pol, m));
      p(k, k) = 1.0;
    }
  std::vector<Outcome> outcomes{{"click", std::move(p)}};
  add_no_click(decl, outcomes);
  return MeasurementSetting(decl, "presence", site, RegisterKind::Occupation, Scope::AtSite, std::move(outcomes),
                            true);
}

namespace {

void check_basis(const BasisDecl& a, const MeasurementSetting& m) {
  if (!(a == m.decl())) throw Error(ErrorKind::BasisMismatch, "setting was built for a different basis");
}

}  // namespace

std::vector<OutcomeRecord> born_probabilities(const StateVector& s, const MeasurementSetting& m) {
  check_basis(s.decl(), m);
  std::vector<OutcomeRecord> out;
  for (const auto& o : m.outcomes()) {
    CVector projected = o.projector * s.amplitudes();
    const double p = projected.squaredNorm();
    OutcomeRecord rec{o.label, p, std::nullopt};
    if (p >= kZeroNormTol) rec.conditional_state = StateVector(s.decl(), projected / std::sqrt(p));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<DensityOutcome> born_probabilities(const DensityOperator& rho, const MeasurementSetting& m) {
  if (!rho.decl()) throw Error(ErrorKind::BasisMismatch, "operator is not over a basis declaration");
  check_basis(*rho.decl(), m);
  std::vector<DensityOutcome> out;
  for (const auto& o : m.outcomes()) {
    CMatrix projected = o.projector * rho.matrix() * o.projector;
    const double p = projected.trace().real();
    DensityOutcome rec{o.label, p, std::nullopt};
    if (p >= kZeroNormTol) {
      CMatrix cond = projected / p;
      cond = (cond + cond.adjoint()) / 2.0;
      rec.conditional = DensityOperator::over(*rho.decl(), std::move(cond));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

StateVector collapse(const StateVector& s, const MeasurementSetting& m, std::string_view outcome_label) {
  check_basis(s.decl(), m);
  const auto& o = m.outcome(outcome_label);
  CVector projected = o.projector * s.amplitudes();
  const double p = projected.squaredNorm();
  if (p < kZeroNormTol)
    throw Error(ErrorKind::ZeroProbabilityOutcome, "outcome '" + std::string(outcome_label) + "' has probability " +
                                                       std::to_string(p));
  return StateVector(s.decl(), projected / std::sqrt(p));
}

namespace {

/// 53-bit uniform in [0,1); defined bit-for-bit, unlike std distributions.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::size_t> sample_indices(std::span<const double> probabilities, std::uint64_t seed,
                                        std::size_t count) {
  std::vector<double> cdf;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    acc += probabilities[k];
    cdf.push_back(acc);
    if (probabilities[k] > 0.0) last_positive = k;
  }
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> draws;
  draws.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double u = uniform01(gen) * acc;
    std::size_t k = 0;
    while (k < cdf.size() && !(u < cdf[k])) ++k;
    draws.push_back(k < cdf.size() ? k : last_positive);
  }
  return draws;
}

std::vector<std::size_t> sample_outcomes(const StateVector& s, const MeasurementSetting& m, std::uint64_t seed,
                                         std::size_t count) {
  std::vector<double> probs;
  for (const auto& r : born_probabilities(s, m)) probs.push_back(r.probability);
  return sample_indices(probs, seed, count);
}

std::vector<std::size_t> sample_outcomes(const DensityOperator& rho, const MeasurementSetting& m,
                                         std::uint64_t seed, std::size_t count) {
  std::vector<double> probs;
  for (const auto& r : born_probabilities(rho, m)) probs.push_back(r.probability);
  return sample_indices(probs, seed, count);
}

OutcomeRecord sample_outcome(const StateVector& s, const MeasurementSetting& m, std::uint64_t seed) {
  const auto k = sample_outcomes(s, m, seed, 1).front();
  return born_probabilities(s, m)[k];
}

DensityOperator reduced_state(const StateVector& s, const Subsystem& keep) {
  return partial_trace(to_density(s), keep);
}

DensityOperator reduced_state(const StateVector& s, std::span<const Subsystem> keep) {
  return partial_trace(to_density(s), keep);
}

}  // namespace qsteer
