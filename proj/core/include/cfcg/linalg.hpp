#pragma once

#include <Eigen/Dense>

namespace cfcg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

/// Systems whose reciprocal condition estimate falls below this are treated as singular.
inline constexpr double kSingularRcond = 1e-14;

/// Solve M x = rhs for symmetric M. Cholesky first; pivoted LDL^T when M is not
/// positive definite. Throws SingularSystem when the rcond estimate is below kSingularRcond.
Vec solve_symmetric(const Mat& m, const Vec& rhs);

/// True iff the Cholesky factorization of the symmetric matrix succeeds with a
/// strictly positive pivot everywhere.
bool is_positive_definite(const Mat& m);

double max_asymmetry(const Mat& m);

}  // namespace linalg
}  // namespace cfcg
