#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's reduction or inequality code.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsteer/state.hpp"

namespace oracle {

using qsteer::CMatrix;
using qsteer::Complex;
using qsteer::CVector;

/// Full occupation^n (x) pol (x) oam product space: dimensions in order.
std::vector<std::size_t> product_dims(const qsteer::BasisDecl& decl);

/// Explicit isometry from the physical basis into the product space.
Eigen::MatrixXd embedding(const qsteer::BasisDecl& decl);

/// Brute-force partial trace over a tensor product with the given factor
/// dimensions, keeping `keep` (factor indices, result in that order).
CMatrix kron_partial_trace(const CMatrix& big, const std::vector<std::size_t>& dims,
                           const std::vector<std::size_t>& keep);

/// Haar-ish random unit vector of length n.
CVector random_unit(std::mt19937_64& gen, std::size_t n);

/// Random density matrix of rank <= n from a Ginibre draw.
CMatrix random_density(std::mt19937_64& gen, std::size_t n);

/// E(a, b) from explicit cos/sin observables.
double correlator(const CMatrix& rho2, double a_deg, double b_deg);

/// Exhaustive four-angle CHSH maximum, S = E00 - E01 + E10 + E11.
double chsh_brute(const CMatrix& rho2, double step_deg);

/// Pearson statistic for observed counts against probabilities, skipping
/// zero-probability cells (which must then have zero counts).
double chi_square(const std::vector<std::size_t>& counts, const std::vector<double>& probs);

std::string read_file(const std::string& path);

}  // namespace oracle
