#include "cfcg/objective.hpp"

#include <memory>
#include <string>

#include "cfcg/errors.hpp"

namespace cfcg {

Objective::Objective(ScalarField fn, Eigen::Index dimension)
    : fn_(std::move(fn)), dimension_(dimension) {
  if (!fn_) throw PreconditionViolation("Objective requires a callable");
  if (dimension_ <= 0) throw DimensionMismatch("Objective dimension must be positive");
}

Objective& Objective::with_fractional_gradient(FracGradientFn fn) {
  closed_form_ = std::move(fn);
  return *this;
}

Objective& Objective::with_coordinate_line(CoordinateLineFn fn) {
  line_ = std::move(fn);
  return *this;
}

Objective& Objective::with_coordinate_slope(CoordinateSlopeFn fn) {
  slope_ = std::move(fn);
  return *this;
}

Objective& Objective::with_fractional_potential(FracPotentialFn fn) {
  potential_ = std::move(fn);
  return *this;
}

void Objective::check_dimension(const Vec& x) const {
  if (x.size() != dimension_)
    throw DimensionMismatch("objective expects dimension " + std::to_string(dimension_) +
                            ", got " + std::to_string(x.size()));
}

double Objective::value(const Vec& x) {
  check_dimension(x);
  ++objective_evals_;
  return fn_(x);
}

double Objective::merit(const Vec& x, const FracParams& params) {
  const double v = peek_merit(x, params);
  ++objective_evals_;
  return v;
}

double Objective::peek_merit(const Vec& x, const FracParams& params) const {
  check_dimension(x);
  return potential_ ? potential_(x, params) : fn_(x);
}

Vec Objective::fractional_gradient(const Vec& x, const FracParams& params,
                                   const QuadratureSpec& spec) {
  Vec g = peek_gradient(x, params, spec);
  ++gradient_evals_;
  return g;
}

Vec Objective::peek_gradient(const Vec& x, const FracParams& params,
                             const QuadratureSpec& spec) const {
  check_dimension(x);
  if (closed_form_) return closed_form_(x, params);
  if (slope_) return frac_gradient_from_slopes(slope_, x, params, spec);
  if (line_) return frac_gradient_general(line_, x, params, spec);
  return frac_gradient_general(fn_, x, params, spec);
}

Objective quadratic_objective(Mat a, Vec b, double c0) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw DimensionMismatch("quadratic_objective: A and b disagree");
  const auto n = b.size();
  auto data = std::make_shared<const std::pair<Mat, Vec>>(std::move(a), std::move(b));
  Objective f(
      [data, c0](const Vec& x) {
        return 0.5 * x.dot(data->first * x) + data->second.dot(x) + c0;
      },
      n);
  f.with_fractional_gradient([data](const Vec& x, const FracParams& params) {
    return frac_gradient_quadratic(data->first, data->second, x, params);
  });
  auto root = std::make_shared<const Vec>(sqrt_diagonal(data->first));
  f.with_fractional_potential([data, root, c0](const Vec& x, const FracParams& params) {
    params.validate(x.size());
    const Vec u = x - params.c;
    const double gamma = gamma_coeff(params.alpha, params.rho);
    return 0.5 * x.dot(data->first * x) + data->second.dot(x) + c0 +
           0.5 * gamma * u.dot(root->cwiseProduct(u));
  });
  return f;
}

}  // namespace cfcg
