#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsteer/measurement.hpp"
#include "qsteer/registers.hpp"

namespace qsteer {

/// Which qubits the two parties hold. `bob` is the frame assemblages are
/// expressed in; `bob_path` is the frame the CJWR/CHSH observables use.
struct SteeringSetup {
  QubitRegister alice;
  QubitRegister bob;
  QubitRegister bob_path;

  /// Polarization for Alice; Bob holds the dual-rail path qubit of the
  /// `alice_site`/`bob_site` pair. Assemblage frame |0> = photon at
  /// `alice_site`; inequality frame |0> = photon at `bob_site`.
  static SteeringSetup rail(const std::string& alice_site, const std::string& bob_site);
  /// Both parties hold a single-site occupation qubit.
  static SteeringSetup occupation(const std::string& alice_site, const std::string& bob_site);
};

enum class QubitBasis { Z, X, Y };

std::string_view to_string(QubitBasis basis);
/// "Z", "X", "Y" (case-insensitive). Throws BadParameters.
QubitBasis parse_qubit_basis(std::string_view text);

/// Pauli operator of a basis.
CMatrix pauli_of(QubitBasis basis);

/// One of Alice's settings on her qubit: outcome labels and eigenvectors.
struct QubitSetting {
  std::string name;
  std::vector<std::pair<std::string, Eigen::Vector2cd>> outcomes;
};

/// Eigenbasis of Z/X/Y on a register, labelled the way that register is read
/// out: polarization H-click/V-click, +/-, L/R; other qubits 0/1, +/-, +i/-i.
QubitSetting qubit_setting(const QubitRegister& reg, QubitBasis basis);

struct AssemblageSetting {
  std::string name;
  std::vector<std::string> labels;
  std::vector<CMatrix> members;  // 2x2, subnormalized
};

/// sigma_{a|x} on Bob's qubit.
struct Assemblage {
  std::string bob_register;
  std::vector<AssemblageSetting> settings;

  const CMatrix& member(std::string_view setting, std::string_view label) const;
  /// sum_a sigma_{a|x}.
  CMatrix marginal(std::size_t x) const;
};

/// Max element-wise deviation of the per-setting marginals from the first.
double no_signaling_residual(const Assemblage& asm_);

/// Settings as qubit bases on Alice's register, applied to the two-qubit
/// operator extracted from `rho`. Throws NonQubitBobMarginal.
Assemblage compute_assemblage(const DensityOperator& rho, const SteeringSetup& setup,
                              std::span<const QubitBasis> bases);
Assemblage compute_assemblage(const StateVector& s, const SteeringSetup& setup, std::span<const QubitBasis> bases);

/// Settings as physical measurements on the full space; member(x,a) =
/// p(a|x) times Bob's qubit state after collapse.
Assemblage compute_assemblage(const DensityOperator& rho, const QubitRegister& bob,
                              std::span<const MeasurementSetting> settings);

/// Two-qubit operator on (Alice, Bob inequality frame).
CMatrix inequality_state(const DensityOperator& rho, const SteeringSetup& setup);

/// F_n = |sum_k <A_k (x) B_k>| / sqrt(n) for n = pairs.size() in {2, 3}.
/// Throws NonDichotomicObservable, BadParameters.
double cjwr_value(const CMatrix& rho2, std::span<const std::pair<CMatrix, CMatrix>> pairs);

/// Standard pairs for the given bases: Z(x)Z, X(x)X, Y(x)conj(Y).
std::vector<std::pair<CMatrix, CMatrix>> cjwr_pairs(std::span<const QubitBasis> bases);

struct ChshResult {
  double value = 0.0;
  std::array<double, 4> angles_deg{};  // a0, a1, b0, b1
  std::array<double, 4> correlators{};  // E(a0,b0), E(a0,b1), E(a1,b0), E(a1,b1)
};

/// E(a,b) for observables cos(t) Z + sin(t) X on each side.
double correlator(const CMatrix& rho2, double a_deg, double b_deg);

/// S = E(a0,b0) - E(a0,b1) + E(a1,b0) + E(a1,b1).
ChshResult chsh_value(const CMatrix& rho2, double a0, double a1, double b0, double b1);

/// Max S over all four angles on a grid of `step_deg` (must divide 360).
ChshResult chsh_optimize(const CMatrix& rho2, double step_deg);

enum class LhsStatus { UnsteerableCertified, NoLHSFoundAtResolution };

std::string_view to_string(LhsStatus status);

struct LhsComponent {
  std::vector<std::size_t> strategy;  // outcome index per setting
  std::array<double, 3> bloch{};
  double weight = 0.0;
};

struct SteeringVerdict {
  LhsStatus status = LhsStatus::NoLHSFoundAtResolution;
  std::size_t grid_size = 0;
  double residual = 0.0;
  std::vector<LhsComponent> certificate;  // empty unless certified
};

/// `count` near-uniform unit vectors (Fibonacci sphere).
std::vector<std::array<double, 3>> fibonacci_sphere(std::size_t count);

/// Inner-approximation LHS test over grid_n^2 pure hidden states and all
/// deterministic strategies. Throws GridTooCoarse (grid_n < 6),
/// TooManySettings (more than 4).
SteeringVerdict lhs_feasibility(const Assemblage& asm_, std::size_t grid_n);

/// sum w D(a|x) |g><g| per member; used to audit certificates.
Assemblage replay_certificate(const Assemblage& shape, std::span<const LhsComponent> certificate);

}  // namespace qsteer
