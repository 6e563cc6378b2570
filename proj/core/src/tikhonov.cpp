#include "cfcg/tikhonov.hpp"

#include <memory>
#include <string>

#include "cfcg/errors.hpp"

namespace cfcg {

Vec LeastSquaresProblem::target() const {
  return convention == BConvention::SectionForm ? y : Vec(X.transpose() * y);
}

LeastSquaresProblem build_quadratic(Mat X, Vec y, BConvention convention) {
  if (X.size() == 0) throw DimensionMismatch("build_quadratic: X is empty");
  const auto n = X.rows();
  const auto m = X.cols();
  const auto expected = convention == BConvention::SectionForm ? m : n;
  if (y.size() != expected)
    throw DimensionMismatch("build_quadratic: y has dimension " + std::to_string(y.size()) +
                            ", expected " + std::to_string(expected));

  LeastSquaresProblem prob;
  prob.X = std::move(X);
  prob.y = std::move(y);
  prob.convention = convention;
  prob.A = prob.X * prob.X.transpose();
  // The product is only symmetric up to rounding; mirror the lower triangle.
  prob.A = prob.A.selfadjointView<Eigen::Lower>();
  const Vec t = prob.target();
  prob.b = -(prob.X * t);
  prob.c_quad = 0.5 * t.squaredNorm();
  prob.r_bar = sqrt_diagonal(prob.A);
  prob.x_bar = Vec::Zero(n);
  return prob;
}

Mat regularized_matrix(const LeastSquaresProblem& prob) {
  Mat m = prob.A;
  m.diagonal() += prob.gamma * prob.r_bar.cwiseAbs2();
  return m;
}

Mat abar_matrix(const LeastSquaresProblem& prob, const FracParams& frac) {
  Mat m = prob.A;
  m.diagonal() += gamma_coeff(frac.alpha, frac.rho) * prob.r_bar;
  return m;
}

Vec tikhonov_solution(const LeastSquaresProblem& prob) {
  if (prob.x_bar.size() != prob.dimension())
    throw DimensionMismatch("tikhonov_solution: x_bar dimension mismatch");
  const Vec rhs = prob.X * (prob.target() - prob.X.transpose() * prob.x_bar);
  return prob.x_bar + linalg::solve_symmetric(regularized_matrix(prob), rhs);
}

double regularized_objective(const LeastSquaresProblem& prob, const Vec& x) {
  if (x.size() != prob.dimension() || prob.x_bar.size() != prob.dimension())
    throw DimensionMismatch("regularized_objective: dimension mismatch");
  const double fit = (prob.X.transpose() * x - prob.target()).squaredNorm();
  const double reg = prob.r_bar.cwiseProduct(x - prob.x_bar).squaredNorm();
  return fit + prob.gamma * reg;
}

Vec regularized_gradient(const LeastSquaresProblem& prob, const Vec& x) {
  if (x.size() != prob.dimension()) throw DimensionMismatch("regularized_gradient: dimension");
  return 2.0 * prob.X * (prob.X.transpose() * x - prob.target()) +
         2.0 * prob.gamma * prob.r_bar.cwiseAbs2().cwiseProduct(x - prob.x_bar);
}

bool check_abar_pd(const LeastSquaresProblem& prob, const FracParams& frac) {
  return linalg::is_positive_definite(abar_matrix(prob, frac));
}

Mat tikhonov_hessian(const LeastSquaresProblem& prob) { return regularized_matrix(prob); }

Vec tikhonov_linear_term(const LeastSquaresProblem& prob) {
  return prob.b - prob.gamma * prob.r_bar.cwiseAbs2().cwiseProduct(prob.x_bar);
}

namespace {

// Sums of squares accumulated in extended precision; near the minimizer the line search
// compares values that differ in their last few digits.
long double weighted_square_sum(const Vec& u, const Vec* weight) {
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const long double v = u[i];
    acc += (weight ? static_cast<long double>((*weight)[i]) : 1.0L) * v * v;
  }
  return acc;
}

struct TikhonovData {
  Mat xt;  // X^T
  Vec t;
  Vec r_sq;
  Vec x_bar;
  double gamma;
  Mat h;
  Vec lin;
  Vec h_root;
};

long double residual_value(const TikhonovData& d, const Vec& x) {
  const Vec fit = d.xt * x - d.t;
  const Vec shift = x - d.x_bar;
  return 0.5L * weighted_square_sum(fit, nullptr) +
         0.5L * d.gamma * weighted_square_sum(shift, &d.r_sq);
}

}  // namespace

Objective tikhonov_objective(const LeastSquaresProblem& prob) {
  if (prob.x_bar.size() != prob.dimension())
    throw DimensionMismatch("tikhonov_objective: x_bar dimension mismatch");
  auto data = std::make_shared<TikhonovData>();
  data->xt = prob.X.transpose();
  data->t = prob.target();
  data->r_sq = prob.r_bar.cwiseAbs2();
  data->x_bar = prob.x_bar;
  data->gamma = prob.gamma;
  data->h = tikhonov_hessian(prob);
  data->lin = tikhonov_linear_term(prob);
  data->h_root = sqrt_diagonal(data->h);

  Objective f([data](const Vec& x) { return static_cast<double>(residual_value(*data, x)); },
              prob.dimension());
  f.with_fractional_gradient([data](const Vec& x, const FracParams& params) {
    return frac_gradient_quadratic(data->h, data->lin, x, params);
  });
  f.with_fractional_potential([data](const Vec& x, const FracParams& params) {
    params.validate(x.size());
    const Vec u = x - params.c;
    const long double extra = 0.5L * gamma_coeff(params.alpha, params.rho) *
                              weighted_square_sum(u, &data->h_root);
    return static_cast<double>(residual_value(*data, x) + extra);
  });
  return f;
}

Vec fractional_fixed_point(const LeastSquaresProblem& prob, const FracParams& frac) {
  frac.validate(prob.dimension());
  const double gar = gamma_coeff(frac.alpha, frac.rho);
  Mat h = tikhonov_hessian(prob);
  const Vec root = sqrt_diagonal(h);
  h.diagonal() += gar * root;
  const Vec rhs = -tikhonov_linear_term(prob) + gar * root.cwiseProduct(frac.c);
  return linalg::solve_symmetric(h, rhs);
}

}  // namespace cfcg
