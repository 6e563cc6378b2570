#pragma once

#include "cfcg/fractional.hpp"
#include "cfcg/objective.hpp"

namespace cfcg {

/// How the linear term of the least-squares quadratic is derived from (X, y).
enum class BConvention {
  /// b = -X y, target y lives in the column space dimension m.
  SectionForm,
  /// b = -A y = -X X^T y, i.e. the least-squares target is X^T y; needs y of dimension n.
  Example1Form,
};

/// min 1/2 |X^T x - t|^2 with X in R^{n x m}, plus the Tikhonov data of problem (T):
///   |X^T x - t|^2 + gamma |Rbar^T (x - x_bar)|^2.
/// t is the effective target: t = y (SectionForm) or t = X^T y (Example1Form), so that
/// 1/2 |X^T x - t|^2 = 1/2 x^T A x + b^T x + c_quad.
struct LeastSquaresProblem {
  Mat X;
  Vec y;
  BConvention convention = BConvention::SectionForm;

  Mat A;             // X X^T
  Vec b;             // -X t
  double c_quad = 0; // 1/2 |t|^2
  Vec r_bar;         // diagonal of Rbar = diag(sqrt(a_11), ..., sqrt(a_nn))
  double gamma = 0;  // Tikhonov parameter
  Vec x_bar;         // Tikhonov anchor

  Eigen::Index dimension() const noexcept { return A.rows(); }
  Vec target() const;
};

/// Derives A, b, c_quad and Rbar. gamma starts at 0 and x_bar at the origin.
LeastSquaresProblem build_quadratic(Mat X, Vec y, BConvention convention);

/// X X^T + gamma Rbar Rbar^T, the matrix inverted by the closed-form solution.
Mat regularized_matrix(const LeastSquaresProblem& prob);

/// X X^T + gamma_{alpha,rho} Rbar (single factor of Rbar), the matrix whose definiteness
/// the fractional convergence theory assumes. Not the same object as regularized_matrix.
Mat abar_matrix(const LeastSquaresProblem& prob, const FracParams& frac);

/// x_T(gamma) = x_bar + (X X^T + gamma Rbar Rbar^T)^{-1} X (t - X^T x_bar).
/// Throws SingularSystem when the regularized matrix is not invertible.
Vec tikhonov_solution(const LeastSquaresProblem& prob);

/// |X^T x - t|^2 + gamma |Rbar^T (x - x_bar)|^2
double regularized_objective(const LeastSquaresProblem& prob, const Vec& x);

/// Analytic gradient 2 X (X^T x - t) + 2 gamma Rbar Rbar^T (x - x_bar).
Vec regularized_gradient(const LeastSquaresProblem& prob, const Vec& x);

bool check_abar_pd(const LeastSquaresProblem& prob, const FracParams& frac);

/// Problem (T) as a quadratic 1/2 x^T H x + h^T x + const with H = regularized_matrix, i.e.
/// one half of regularized_objective, carrying its closed-form fractional gradient and the
/// matching potential. Values are computed in residual form with extended-precision sums.
Objective tikhonov_objective(const LeastSquaresProblem& prob);

/// Hessian and linear term of tikhonov_objective.
Mat tikhonov_hessian(const LeastSquaresProblem& prob);
Vec tikhonov_linear_term(const LeastSquaresProblem& prob);

/// Zero of the closed-form fractional gradient of tikhonov_objective:
///   (H + gamma_{alpha,rho} diag(sqrt(h_ii))) x = -h + gamma_{alpha,rho} diag(sqrt(h_ii)) c.
/// This is where fractional iterations on problem (T) come to rest. It coincides with
/// tikhonov_solution only when the fractional correction vanishes there.
Vec fractional_fixed_point(const LeastSquaresProblem& prob, const FracParams& frac);

}  // namespace cfcg
