#include "cfcg/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cfcg/errors.hpp"

namespace cfcg {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("fractional order alpha must lie in (0,1), got " + std::to_string(alpha));
}

// (hi^p - lo^p) / p for 0 <= lo < hi, without cancellation when lo ~ hi.
double power_difference(double hi, double lo, double p) {
  if (lo <= 0.0) return std::pow(hi, p) / p;
  return std::pow(lo, p) * std::expm1(p * std::log(hi / lo)) / p;
}

// Kernel moments on a uniform mesh of unit width, indexed by k = distance (in cells) of the
// far end of the cell from the evaluation point, k = 1..n:
//   p_k = int_{k-1}^{k} s^-alpha ds,   q_k = int_{k-1}^{k} s^-alpha (k - s) ds.
// For mesh width h the true moments are h^(1-alpha) p_k and h^(2-alpha) q_k.
struct KernelMoments {
  std::vector<double> p;
  std::vector<double> q;
};

KernelMoments kernel_moments(double alpha, int n) {
  const double beta = 1.0 - alpha;
  KernelMoments m;
  m.p.resize(static_cast<std::size_t>(n) + 1, 0.0);
  m.q.resize(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    const double hi = k;
    const double lo = k - 1;
    const double p = power_difference(hi, lo, beta);
    m.p[k] = p;
    m.q[k] = hi * p - power_difference(hi, lo, beta + 1.0);
  }
  return m;
}

// Samples f' at the n+1 nodes a + j (x - a) / n.
std::vector<double> sample_nodes(const ScalarFn& derivative, double a, double x, int n) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  const double step = (x - a) / n;
  for (int j = 0; j <= n; ++j) v[j] = derivative(j == n ? x : a + j * step);
  return v;
}

// int over the segment of |x - t|^-alpha times the piecewise-linear interpolant of v, taken
// with positive orientation (i.e. as if a < x).
double trapezoid_sum(const std::vector<double>& v, const KernelMoments& m, double length,
                     double alpha) {
  const int n = static_cast<int>(v.size()) - 1;
  const double h = length / n;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = n - j;
    acc += v[j] * (m.p[k] - m.q[k]) + v[j + 1] * m.q[k];
  }
  return std::pow(h, 1.0 - alpha) * acc;
}

// Same kernel against the piecewise-constant slope of the interpolant, slope measured
// per unit of |t - a|.
double slope_sum(const std::vector<double>& v, const KernelMoments& m, double length,
                 double alpha) {
  const int n = static_cast<int>(v.size()) - 1;
  const double h = length / n;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += (v[j + 1] - v[j]) * m.p[n - j];
  return std::pow(h, -alpha) * acc;
}

double sign_of(double u) { return u < 0.0 ? -1.0 : 1.0; }

}  // namespace

void FracParams::validate(Eigen::Index dim) const {
  check_alpha(alpha);
  if (!std::isfinite(rho)) throw DomainError("rho must be finite");
  if (c.size() != dim)
    throw DimensionMismatch("lower terminal c has dimension " + std::to_string(c.size()) +
                            ", expected " + std::to_string(dim));
}

void QuadratureSpec::validate() const {
  if (node_count < 2) throw DomainError("node_count must be >= 2");
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be > 0");
  if (!(terminal_guard > 0.0)) throw DomainError("terminal_guard must be > 0");
}

double gamma_coeff(double alpha, double rho) {
  check_alpha(alpha);
  return rho - (1.0 - alpha) / (2.0 - alpha);
}

double taylor_coeff(double alpha, double rho) {
  check_alpha(alpha);
  return 1.0 / (2.0 - alpha) + rho;
}

double caputo_derivative(const ScalarFn& derivative, double a, double x, double alpha,
                         const QuadratureSpec& spec) {
  check_alpha(alpha);
  spec.validate();
  if (a == x) return 0.0;
  const auto m = kernel_moments(alpha, spec.node_count);
  const auto v = sample_nodes(derivative, a, x, spec.node_count);
  return sign_of(x - a) * trapezoid_sum(v, m, std::abs(x - a), alpha) / std::tgamma(1.0 - alpha);
}

double caputo_derivative_shifted(const ScalarFn& derivative, double a, double x, double alpha,
                                 const QuadratureSpec& spec) {
  check_alpha(alpha);
  spec.validate();
  if (a == x) return 0.0;
  const auto m = kernel_moments(alpha, spec.node_count);
  const auto v = sample_nodes(derivative, a, x, spec.node_count);
  // f'' = dv / dt = sign(x-a) dv / d|t-a|, and the orientation contributes another sign(x-a).
  return slope_sum(v, m, std::abs(x - a), alpha) / std::tgamma(1.0 - alpha);
}

double identity_derivative(double a, double x, double alpha) {
  check_alpha(alpha);
  const double u = x - a;
  return sign_of(u) * std::pow(std::abs(u), 1.0 - alpha) / std::tgamma(2.0 - alpha);
}

Vec sqrt_diagonal(const Mat& a) {
  Vec d = a.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < 0.0)
      throw DomainError("diagonal entry " + std::to_string(i) + " of A is negative");
    d(i) = std::sqrt(d(i));
  }
  return d;
}

Vec frac_gradient_quadratic(const Mat& a, const Vec& b, const Vec& x, const FracParams& params) {
  const auto n = x.size();
  if (a.rows() != n || a.cols() != n || b.size() != n)
    throw DimensionMismatch("frac_gradient_quadratic: A is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", b has " + std::to_string(b.size()) +
                            ", x has " + std::to_string(n));
  params.validate(n);
  const double gamma = gamma_coeff(params.alpha, params.rho);
  return a * x + b + gamma * sqrt_diagonal(a).cwiseProduct(x - params.c);
}

Vec frac_gradient_from_slopes(const CoordinateSlopeFn& slope, const Vec& x,
                              const FracParams& params, const QuadratureSpec& spec) {
  const auto n = x.size();
  params.validate(n);
  spec.validate();

  const double alpha = params.alpha;
  const auto moments = kernel_moments(alpha, spec.node_count);
  const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);

  Vec g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ci = params.c(i);
    const double u = x(i) - ci;
    double normalizer;
    if (std::abs(u) < spec.terminal_guard) {
      if (!spec.clamp_terminal)
        throw SingularTerminal("coordinate " + std::to_string(i) + " is within " +
                                   std::to_string(spec.terminal_guard) + " of its lower terminal",
                               static_cast<long>(i));
      normalizer = sign_of(u) * std::pow(spec.terminal_guard, 1.0 - alpha) /
                   std::tgamma(2.0 - alpha);
    } else {
      normalizer = identity_derivative(ci, x(i), alpha);
    }
    if (u == 0.0) {
      g(i) = 0.0;
      continue;
    }

    const auto v = sample_nodes(slope(x, i), ci, x(i), spec.node_count);
    const double length = std::abs(u);
    const double d_alpha = sign_of(u) * trapezoid_sum(v, moments, length, alpha) * inv_gamma;
    const double d_shifted = slope_sum(v, moments, length, alpha) * inv_gamma;
    // rho |x - c| sign(x - c) keeps the correction linear in (x - c) on both sides of c.
    g(i) = (d_alpha + params.rho * u * d_shifted) / normalizer;
  }
  return g;
}

Vec frac_gradient_general(const CoordinateLineFn& line, const Vec& x, const FracParams& params,
                          const QuadratureSpec& spec) {
  const double fd_step = spec.fd_step;
  const CoordinateSlopeFn slope = [&line, fd_step](const Vec& base, Eigen::Index i) -> ScalarFn {
    const double h = fd_step * std::max(1.0, std::abs(base(i)));
    return [phi = line(base, i), h](double t) { return (phi(t + h) - phi(t - h)) / (2.0 * h); };
  };
  return frac_gradient_from_slopes(slope, x, params, spec);
}

Vec frac_gradient_general(const ScalarField& f, const Vec& x, const FracParams& params,
                          const QuadratureSpec& spec) {
  const CoordinateLineFn line = [&f](const Vec& base, Eigen::Index i) -> ScalarFn {
    return [&f, probe = Vec(base), i](double t) mutable {
      probe(i) = t;
      return f(probe);
    };
  };
  return frac_gradient_general(line, x, params, spec);
}

Vec central_difference_gradient(const ScalarField& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + step;
    const double up = f(probe);
    probe(i) = x(i) - step;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

}  // namespace cfcg
