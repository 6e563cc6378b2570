#include "cfcg/linalg.hpp"

#include <limits>
#include <string>

#include "cfcg/errors.hpp"

namespace cfcg::linalg {

Vec solve_symmetric(const Mat& m, const Vec& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.size())
    throw DimensionMismatch("solve_symmetric: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", rhs has " + std::to_string(rhs.size()));

  Eigen::LLT<Mat> llt(m);
  if (llt.info() == Eigen::Success) {
    if (llt.rcond() < kSingularRcond) throw SingularSystem("solve_symmetric: rcond below threshold");
    return llt.solve(rhs);
  }

  Eigen::LDLT<Mat> ldlt(m);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < kSingularRcond)
    throw SingularSystem("solve_symmetric: matrix is numerically singular");
  return ldlt.solve(rhs);
}

bool is_positive_definite(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) return false;
  return (llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all();
}

double max_asymmetry(const Mat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace cfcg::linalg
