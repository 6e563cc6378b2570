#pragma once

#include <functional>

#include "cfcg/linalg.hpp"

namespace cfcg {

/// Order, shift and lower terminals of the modified Caputo fractional gradient.
struct FracParams {
  double alpha = 0.9;
  double rho = 0.1;
  Vec c;  // one lower terminal per coordinate

  /// Throws DomainError unless 0 < alpha < 1, DimensionMismatch if c.size() != dim.
  void validate(Eigen::Index dim) const;
};

/// Controls the product-integration rule used for general objectives.
struct QuadratureSpec {
  int node_count = 2000;  // subintervals per coordinate segment [c_i, x_i]
  /// Relative central-difference step; the absolute step is fd_step * max(1, |x_i|).
  double fd_step = 1e-5;
  /// |x_i - c_i| below this is a singular terminal.
  double terminal_guard = 1e-8;
  /// When set, a singular terminal is clamped to +-terminal_guard instead of raising.
  bool clamp_terminal = false;

  void validate() const;
};

/// gamma_{alpha,rho} = rho - (1 - alpha) / (2 - alpha)
double gamma_coeff(double alpha, double rho);

/// C_{alpha,rho} = Gamma(2-alpha) Gamma(2) / Gamma(3-alpha) + rho = 1 / (2 - alpha) + rho.
/// Always equals gamma_coeff(alpha, rho) + 1.
double taylor_coeff(double alpha, double rho);

using ScalarFn = std::function<double(double)>;
using ScalarField = std::function<double(const Vec&)>;
/// Restriction of a field to coordinate i through x: t -> f(x_1, ..., t, ..., x_n).
using CoordinateLineFn = std::function<ScalarFn(const Vec& x, Eigen::Index i)>;
/// Derivative of that restriction, t -> df/dx_i (x_1, ..., t, ..., x_n).
using CoordinateSlopeFn = std::function<ScalarFn(const Vec& x, Eigen::Index i)>;

/// Caputo derivative of order alpha in (0,1) with lower terminal a, given f' as a sampler:
///
///   D^alpha f(x) = 1/Gamma(1-alpha) * int_a^x (x - t)^(-alpha) f'(t) dt.
///
/// f' is interpolated piecewise-linearly on a uniform mesh and the kernel is integrated
/// exactly on every subinterval, so the rule is exact when f' is affine. For x < a the
/// orientation is reversed: the result is -1/Gamma(1-alpha) int_x^a (t - x)^(-alpha) f'(t) dt.
/// Returns 0 when a == x.
double caputo_derivative(const ScalarFn& derivative, double a, double x, double alpha,
                         const QuadratureSpec& spec);

/// Order 1 + alpha: same kernel against f''. f'' is taken piecewise constant as the slope of
/// the interpolated f' samples (the classical L1 scheme), so only f' is sampled.
double caputo_derivative_shifted(const ScalarFn& derivative, double a, double x, double alpha,
                                 const QuadratureSpec& spec);

/// D^alpha of the identity map t -> t on [a, x]: sign(x-a) |x-a|^(1-alpha) / Gamma(2-alpha).
/// This is the per-coordinate normalizer of the fractional gradient.
double identity_derivative(double a, double x, double alpha);

/// Closed-form fractional gradient of f(x) = 1/2 x^T A x + b^T x:
///   g(x) = A x + b + gamma_{alpha,rho} * Rbar (x - c),  Rbar = diag(sqrt(a_11), ..., sqrt(a_nn)).
Vec frac_gradient_quadratic(const Mat& a, const Vec& b, const Vec& x, const FracParams& params);

/// diag(sqrt(a_ii)); throws DomainError on a negative diagonal entry.
Vec sqrt_diagonal(const Mat& a);

/// Modified Caputo fractional gradient of an arbitrary objective, coordinate by coordinate:
///
///   g_i = [ D^alpha phi_i(x_i) + rho (x_i - c_i) D^{1+alpha} phi_i(x_i) ] / D^alpha I(x_i)
///
/// where phi_i(t) is f with coordinate i replaced by t and all derivatives use terminal c_i.
/// phi_i' is sampled by central differences at the quadrature nodes.
Vec frac_gradient_general(const ScalarField& f, const Vec& x, const FracParams& params,
                          const QuadratureSpec& spec);
/// Same, for objectives that can evaluate along a coordinate line more cheaply than in full.
Vec frac_gradient_general(const CoordinateLineFn& line, const Vec& x, const FracParams& params,
                          const QuadratureSpec& spec);
/// Same, sampling phi_i' exactly from an analytic slope instead of differencing.
Vec frac_gradient_from_slopes(const CoordinateSlopeFn& slope, const Vec& x,
                              const FracParams& params, const QuadratureSpec& spec);

/// Plain central-difference gradient with step h * max(1, |x_i|).
Vec central_difference_gradient(const ScalarField& f, const Vec& x, double h = 1e-6);

}  // namespace cfcg
