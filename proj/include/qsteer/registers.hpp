#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsteer/state.hpp"

namespace qsteer {

// Register view of the vacuum (+) one-photon space.
//
// The physical space embeds isometrically into
//     occ[s_1] (x) ... (x) occ[s_n] (x) pol (x) oam
// with sites in sorted order. A photon ket |s,p,m> maps to occupation 1 at s,
// 0 elsewhere, polarization p and OAM m. The vacuum maps to all-zero
// occupations carrying the reference internal state (H, reference_oam()), so
// coherence between the vacuum and a photon in that mode survives tracing out
// the internal registers.

/// Register dimensions and labels for a declaration.
std::size_t register_dimension(const BasisDecl& decl, const Subsystem& sub);
std::vector<std::string> register_labels(const BasisDecl& decl, const Subsystem& sub);

/// Value of one register for one physical ket.
std::size_t register_value(const BasisDecl& decl, const Subsystem& sub, const BasisKet& ket);

/// Reduced operator on the kept registers, first register most significant.
/// The input must be a full-space operator (carry its BasisDecl). Throws
/// UnknownSubsystem for unknown sites, duplicate or empty selections.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const Subsystem> keep);
DensityOperator partial_trace(const DensityOperator& rho, const Subsystem& keep);

/// A two-level system read off the register view: polarization (H=0, V=1),
/// one site's occupation, a dual-rail pair of sites, or a pair of OAM values.
class QubitRegister {
 public:
  enum class Kind { Polarization, Occupation, DualRail, OamPair };

  static QubitRegister polarization();
  static QubitRegister occupation(std::string site);
  /// |0> = photon at `zero_site`, |1> = photon at `one_site`.
  static QubitRegister dual_rail(std::string zero_site, std::string one_site);
  static QubitRegister oam_pair(int zero_m, int one_m);

  Kind kind() const { return kind_; }
  const std::string& site0() const { return site0_; }
  const std::string& site1() const { return site1_; }

  std::vector<Subsystem> registers() const;
  /// Qubit index (0/1) of a physical ket, or -1 outside the qubit subspace.
  int qubit_of(const BasisDecl& decl, const BasisKet& ket) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Polarization;
  std::string site0_, site1_;
  int m0_ = 0, m1_ = 0;
};

/// 4x4 operator on (alice qubit) (x) (bob qubit), everything else traced out.
/// Weight outside the two-qubit subspace above `leak_tol` raises
/// NonQubitBobMarginal.
CMatrix qubit_pair(const DensityOperator& rho, const QubitRegister& alice, const QubitRegister& bob,
                   double leak_tol = kPipelineTol);

/// 2x2 operator on one qubit register, everything else traced out.
CMatrix single_qubit(const DensityOperator& rho, const QubitRegister& reg,
                     double leak_tol = kPipelineTol);

}  // namespace qsteer
