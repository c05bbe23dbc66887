#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsteer/basis.hpp"

namespace qsteer {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kPipelineTol = 1e-9;
inline constexpr double kZeroNormTol = 1e-14;

/// Complex amplitudes over the ordered basis of a BasisDecl. Values are
/// immutable; every operation returns a new state. Normalization is not
/// enforced at construction so that normalize() has something to do, but
/// operations that require unit norm check it.
class StateVector {
 public:
  /// All-zero amplitudes.
  explicit StateVector(BasisDecl decl);
  StateVector(BasisDecl decl, CVector amplitudes);

  static StateVector vacuum(BasisDecl decl);
  static StateVector from_terms(BasisDecl decl,
                                const std::vector<std::pair<BasisKet, Complex>>& terms);

  const BasisDecl& decl() const { return decl_; }
  const CVector& amplitudes() const { return amp_; }
  std::size_t dimension() const { return decl_.dimension(); }

  Complex amplitude(const BasisKet& ket) const;
  double norm() const { return amp_.norm(); }
  bool is_normalized(double tol = kAlgebraTol) const;

  /// Nonzero terms in basis order.
  std::vector<std::pair<BasisKet, Complex>> terms(double cutoff = 0.0) const;

  /// Same amplitudes over a wider (or reordered) declaration. Throws
  /// BasisMismatch when a populated ket has no counterpart in `target`.
  StateVector reembed(const BasisDecl& target) const;

 private:
  BasisDecl decl_;
  CVector amp_;
};

/// Hermitian PSD operator with trace in (0, 1], indexed by an explicit
/// ordered label list. Full-space operators also keep their BasisDecl.
class DensityOperator {
 public:
  /// Validates the invariants; throws InvalidState.
  DensityOperator(std::vector<std::string> labels, CMatrix matrix,
                  std::optional<BasisDecl> decl = std::nullopt);

  static DensityOperator over(const BasisDecl& decl, CMatrix matrix);

  const CMatrix& matrix() const { return rho_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<BasisDecl>& decl() const { return decl_; }
  std::size_t dimension() const { return labels_.size(); }

  double trace() const { return rho_.trace().real(); }
  double purity() const;
  /// Entry by row/column label. Throws UnknownSubsystem for unknown labels.
  Complex at(std::string_view row, std::string_view col) const;

 private:
  std::vector<std::string> labels_;
  CMatrix rho_;
  std::optional<BasisDecl> decl_;
};

/// Throws ZeroState when the norm is at or below 1e-14.
StateVector normalize(const StateVector& s);

Complex inner_product(const StateVector& bra, const StateVector& ket);

/// Rank-one projector; input must be normalized.
DensityOperator to_density(const StateVector& s);

/// |<s|t>|^2 for normalized states over the same basis.
double fidelity(const StateVector& s, const StateVector& t);

/// Tr(rho * obs). Throws DimensionMismatch / NonHermitian.
double expectation_value(const DensityOperator& rho, const CMatrix& obs);

/// Apply `u` to the polarization or OAM register, optionally only to the
/// amplitudes of one site. Occupation registers have no single-photon local
/// unitary beyond phases and are rejected with UnknownSubsystem.
StateVector apply_local_unitary(const StateVector& s, const CMatrix& u, const Subsystem& target,
                                const std::optional<std::string>& at_site = std::nullopt);

bool is_unitary(const CMatrix& u, double tol = kAlgebraTol);
bool is_hermitian(const CMatrix& m, double tol = kAlgebraTol);

/// Kronecker product, first factor most significant.
CMatrix kron(const CMatrix& a, const CMatrix& b);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

}  // namespace qsteer
