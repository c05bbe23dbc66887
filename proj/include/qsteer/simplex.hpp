#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace qsteer::lp {

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd x;           // length = A.cols(); meaningful when feasible
  double infeasibility = 0.0;  // phase-1 optimum (sum of artificials)
  double residual = 0.0;       // max |A x - b| after the final re-solve
  std::size_t iterations = 0;
};

/// Phase-1 simplex for {x >= 0 : A x = b} with Bland's rule. Rows may be
/// redundant. The basic solution is re-solved with an LU factorization of
/// the final basis before the residual is measured.
FeasibilityResult find_feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-8);

}  // namespace qsteer::lp
