#include "qsteer/state.hpp"

#include <algorithm>

#include "qsteer/errors.hpp"

namespace qsteer {

StateVector::StateVector(BasisDecl decl) : decl_(std::move(decl)) {
  amp_ = CVector::Zero(static_cast<Eigen::Index>(decl_.dimension()));
}

StateVector::StateVector(BasisDecl decl, CVector amplitudes)
    : decl_(std::move(decl)), amp_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amp_.size()) != decl_.dimension())
    throw Error(ErrorKind::DimensionMismatch, "amplitude vector does not match basis dimension");
}

StateVector StateVector::vacuum(BasisDecl decl) {
  StateVector s(std::move(decl));
  s.amp_(0) = 1.0;
  return s;
}

StateVector StateVector::from_terms(BasisDecl decl,
                                    const std::vector<std::pair<BasisKet, Complex>>& terms) {
  StateVector s(std::move(decl));
  for (const auto& [ket, value] : terms) {
    s.amp_(static_cast<Eigen::Index>(s.decl_.index_of(ket))) += value;
  }
  return s;
}

Complex StateVector::amplitude(const BasisKet& ket) const {
  auto index = decl_.find(ket);
  if (!index) return 0.0;
  return amp_(static_cast<Eigen::Index>(*index));
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

std::vector<std::pair<BasisKet, Complex>> StateVector::terms(double cutoff) const {
  std::vector<std::pair<BasisKet, Complex>> out;
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (std::abs(amp_(i)) > cutoff) out.emplace_back(decl_.ket(static_cast<std::size_t>(i)), amp_(i));
  }
  return out;
}

StateVector StateVector::reembed(const BasisDecl& target) const {
  StateVector out(target);
  for (const auto& [ket, value] : terms()) {
    auto index = target.find(ket);
    if (!index)
      throw Error(ErrorKind::BasisMismatch, "ket " + ket.label() + " has no place in the target basis");
    out.amp_(static_cast<Eigen::Index>(*index)) = value;
  }
  return out;
}

DensityOperator::DensityOperator(std::vector<std::string> labels, CMatrix matrix,
                                 std::optional<BasisDecl> decl)
    : labels_(std::move(labels)), rho_(std::move(matrix)), decl_(std::move(decl)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (rho_.rows() != n || rho_.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "density matrix does not match label count");
  if (decl_ && decl_->dimension() != labels_.size())
    throw Error(ErrorKind::DimensionMismatch, "density matrix does not match basis dimension");
  if (!is_hermitian(rho_)) throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
  const double tr = trace();
  if (!(tr > 0.0) || tr > 1.0 + kAlgebraTol)
    throw Error(ErrorKind::InvalidState, "density matrix trace outside (0, 1]");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kAlgebraTol)
    throw Error(ErrorKind::InvalidState, "density matrix has a negative eigenvalue");
}

DensityOperator DensityOperator::over(const BasisDecl& decl, CMatrix matrix) {
  std::vector<std::string> labels;
  labels.reserve(decl.dimension());
  for (const auto& k : decl.kets()) labels.push_back(k.label());
  return DensityOperator(std::move(labels), std::move(matrix), decl);
}

double DensityOperator::purity() const { return (rho_ * rho_).trace().real(); }

Complex DensityOperator::at(std::string_view row, std::string_view col) const {
  auto find = [&](std::string_view label) {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
      throw Error(ErrorKind::UnknownSubsystem, "no basis label '" + std::string(label) + "'");
    return static_cast<Eigen::Index>(it - labels_.begin());
  };
  return rho_(find(row), find(col));
}

StateVector normalize(const StateVector& s) {
  const double n = s.norm();
  if (n <= kZeroNormTol) throw Error(ErrorKind::ZeroState, "cannot normalize a zero state");
  // Within rounding of unit norm: leave the bits alone so normalize is idempotent.
  if (std::abs(n - 1.0) <= 1e-15) return s;
  return StateVector(s.decl(), s.amplitudes() / n);
}

Complex inner_product(const StateVector& bra, const StateVector& ket) {
  if (!(bra.decl() == ket.decl()))
    throw Error(ErrorKind::BasisMismatch, "states are declared over different bases");
  return bra.amplitudes().dot(ket.amplitudes());
}

DensityOperator to_density(const StateVector& s) {
  if (!s.is_normalized())
    throw Error(ErrorKind::InvalidState, "to_density requires a normalized state");
  return DensityOperator::over(s.decl(), s.amplitudes() * s.amplitudes().adjoint());
}

double fidelity(const StateVector& s, const StateVector& t) {
  if (!s.is_normalized() || !t.is_normalized())
    throw Error(ErrorKind::InvalidState, "fidelity requires normalized states");
  return std::min(1.0, std::norm(inner_product(s, t)));
}

double expectation_value(const DensityOperator& rho, const CMatrix& obs) {
  if (obs.rows() != obs.cols() || static_cast<std::size_t>(obs.rows()) != rho.dimension())
    throw Error(ErrorKind::DimensionMismatch, "observable does not match operator dimension");
  if (!is_hermitian(obs)) throw Error(ErrorKind::NonHermitian, "observable is not Hermitian");
  return (rho.matrix() * obs).trace().real();
}

StateVector apply_local_unitary(const StateVector& s, const CMatrix& u, const Subsystem& target,
                                const std::optional<std::string>& at_site) {
  const auto& decl = s.decl();
  if (at_site) decl.site_position(*at_site);
  if (target.kind == RegisterKind::Occupation)
    throw Error(ErrorKind::UnknownSubsystem,
                "occupation registers admit no local unitary inside the one-photon space");
  const auto dim = target.kind == RegisterKind::Polarization ? std::size_t{2} : decl.oam_values().size();
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != dim)
    throw Error(ErrorKind::DimensionMismatch, "unitary of size " + std::to_string(u.rows()) +
                                                  " on a register of dimension " + std::to_string(dim));
  if (!is_unitary(u)) throw Error(ErrorKind::NonUnitary, "matrix is not unitary");

  CVector out = s.amplitudes();
  const auto& oam = decl.oam_values();
  for (const auto& site : decl.sorted_sites()) {
    if (at_site && site != *at_site) continue;
    if (target.kind == RegisterKind::Polarization) {
      for (int m : oam) {
        const auto h = static_cast<Eigen::Index>(decl.index_of(site, Pol::H, m));
        const auto v = static_cast<Eigen::Index>(decl.index_of(site, Pol::V, m));
        const Complex a = out(h), b = out(v);
        out(h) = u(0, 0) * a + u(0, 1) * b;
        out(v) = u(1, 0) * a + u(1, 1) * b;
      }
    } else {
      for (Pol p : {Pol::H, Pol::V}) {
        CVector block(static_cast<Eigen::Index>(oam.size()));
        for (std::size_t k = 0; k < oam.size(); ++k)
          block(static_cast<Eigen::Index>(k)) = out(static_cast<Eigen::Index>(decl.index_of(site, p, oam[k])));
        block = u * block;
        for (std::size_t k = 0; k < oam.size(); ++k)
          out(static_cast<Eigen::Index>(decl.index_of(site, p, oam[k]))) = block(static_cast<Eigen::Index>(k));
      }
    }
  }
  return StateVector(decl, std::move(out));
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace pauli {
CMatrix identity() { return CMatrix::Identity(2, 2); }
CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace qsteer
