#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "cfcg/fractional.hpp"

namespace cfcg {

/// Closed-form fractional gradient supplied by problems that have one (quadratics).
using FracGradientFn = std::function<Vec(const Vec& x, const FracParams& params)>;
/// Function whose ordinary gradient is the fractional gradient, when one exists.
using FracPotentialFn = std::function<double(const Vec& x, const FracParams& params)>;

/// A function being minimized, with instrumented evaluation counters.
///
/// The solvers measure decrease with merit(): the fractional potential when the objective
/// supplies one, otherwise the objective itself. With a potential attached the Armijo and
/// Wolfe tests are taken on the function the fractional gradient actually differentiates.
///
/// value() and merit() count one objective evaluation per call. fractional_gradient() counts one
/// gradient evaluation per call and never touches the objective counter, even when the
/// gradient is obtained by quadrature over many raw function samples. Copies carry their
/// own counters; an instance must not be shared by concurrent runs.
class Objective {
 public:
  Objective(ScalarField fn, Eigen::Index dimension);

  /// Attach a closed-form fractional gradient; quadrature is bypassed when present.
  Objective& with_fractional_gradient(FracGradientFn fn);
  /// Attach a cheap coordinate-line evaluator used by the quadrature path.
  Objective& with_coordinate_line(CoordinateLineFn fn);
  /// Analytic partial derivative along a coordinate line; preferred over the line hook.
  Objective& with_coordinate_slope(CoordinateSlopeFn fn);

  /// Attach the potential of the fractional gradient (e.g. for quadratics).
  Objective& with_fractional_potential(FracPotentialFn fn);

  double value(const Vec& x);
  double merit(const Vec& x, const FracParams& params);
  Vec fractional_gradient(const Vec& x, const FracParams& params, const QuadratureSpec& spec);

  /// Uncounted evaluation, for oracles and invariant checkers.
  double peek(const Vec& x) const { return fn_(x); }
  double peek_merit(const Vec& x, const FracParams& params) const;
  Vec peek_gradient(const Vec& x, const FracParams& params, const QuadratureSpec& spec) const;

  const ScalarField& field() const noexcept { return fn_; }
  Eigen::Index dimension() const noexcept { return dimension_; }
  bool has_closed_form_gradient() const noexcept { return static_cast<bool>(closed_form_); }
  bool has_potential() const noexcept { return static_cast<bool>(potential_); }

  std::int64_t objective_evals() const noexcept { return objective_evals_; }
  std::int64_t gradient_evals() const noexcept { return gradient_evals_; }
  void reset_counters() noexcept { objective_evals_ = gradient_evals_ = 0; }

 private:
  void check_dimension(const Vec& x) const;

  ScalarField fn_;
  FracGradientFn closed_form_;
  CoordinateLineFn line_;
  CoordinateSlopeFn slope_;
  FracPotentialFn potential_;
  Eigen::Index dimension_;
  std::int64_t objective_evals_ = 0;
  std::int64_t gradient_evals_ = 0;
};

/// f(x) = 1/2 x^T A x + b^T x + c0 with its closed-form fractional gradient and potential
///   F(x) = f(x) + 1/2 gamma_{alpha,rho} (x - c)^T Rbar (x - c)
/// attached.
Objective quadratic_objective(Mat a, Vec b, double c0 = 0.0);

}  // namespace cfcg
