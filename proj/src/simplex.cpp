#include "qsteer/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qsteer::lp {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;
constexpr double kRankTol = 1e-10;
constexpr double kResidualTol = 1e-7;

/// Indices of a maximal linearly independent subset of A's rows.
std::vector<Eigen::Index> independent_rows(const Eigen::MatrixXd& A) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
  qr.setThreshold(kRankTol);
  std::vector<Eigen::Index> rows;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = 0; k < qr.rank(); ++k) rows.push_back(perm(k));
  std::sort(rows.begin(), rows.end());
  return rows;
}

struct Phase1 {
  std::vector<Eigen::Index> basic;
  double infeasibility = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes the sum of artificials for A x = b (b >= 0) with Bland's rule.
Phase1 run_phase1(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const Eigen::Index rhs = n + m;
  Tableau t = Tableau::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.col(rhs).head(m) = b;
  // Cost row: reduced costs of "minimize sum of artificials".
  t.row(m).head(n) = -A.colwise().sum();
  t(m, rhs) = -b.sum();

  Phase1 out;
  out.basic.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out.basic[static_cast<std::size_t>(i)] = n + i;

  const std::size_t max_iter = 50 * static_cast<std::size_t>(n + m) + 1000;
  while (out.iterations < max_iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (t(m, j) < -kCostTol) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = t(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, t(i, rhs)) / a;
      const bool tie = leave >= 0 && std::abs(ratio - best) <= 1e-14;
      if ((!tie && ratio < best) ||
          (tie && out.basic[static_cast<std::size_t>(i)] < out.basic[static_cast<std::size_t>(leave)])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) break;

    const double pivot = t(leave, enter);
    t.row(leave) /= pivot;
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(t(i, rhs)) < kPivotTol) t(i, rhs) = 0.0;
    out.basic[static_cast<std::size_t>(leave)] = enter;
    ++out.iterations;
  }
  for (Eigen::Index i = 0; i < m; ++i)
    if (out.basic[static_cast<std::size_t>(i)] >= n) out.infeasibility += std::max(0.0, t(i, rhs));
  return out;
}

}  // namespace

FeasibilityResult find_feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index n = A.cols();
  FeasibilityResult result;
  result.x = Eigen::VectorXd::Zero(n);
  if (A.rows() == 0) {
    result.feasible = true;
    return result;
  }

  // Redundant rows only add degenerate artificials; drop them and check
  // them again through the final residual.
  const auto rows = independent_rows(A);
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(m, n);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(rows[static_cast<std::size_t>(i)]) < 0 ? -1.0 : 1.0;
    a.row(i) = sign * A.row(rows[static_cast<std::size_t>(i)]);
    rhs(i) = sign * b(rows[static_cast<std::size_t>(i)]);
  }

  const auto phase1 = run_phase1(a, rhs);
  result.iterations = phase1.iterations;
  result.infeasibility = phase1.infeasibility;

  // Re-solve the final basis from the original data.
  Eigen::MatrixXd basis(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index j = phase1.basic[static_cast<std::size_t>(k)];
    if (j < n) {
      basis.col(k) = a.col(j);
    } else {
      basis.col(k).setZero();
      basis(j - n, k) = 1.0;
    }
  }
  const Eigen::VectorXd xb = basis.fullPivLu().solve(rhs);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index j = phase1.basic[static_cast<std::size_t>(k)];
    if (j < n) result.x(j) = std::max(0.0, xb(k));
  }
  result.residual = (A * result.x - b).cwiseAbs().maxCoeff();
  // Dropped rows can still be inconsistent with the kept ones.
  if (result.residual > kResidualTol) result.infeasibility = std::max(result.infeasibility, result.residual);
  result.feasible = result.infeasibility <= tol;
  return result;
}

}  // namespace qsteer::lp
