#pragma once

// Independent oracles for the test suites. Nothing here calls into the library's
// numerical code.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cfcg::testing {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Gaussian elimination with partial pivoting on a copy of (m | rhs).
inline Vec gauss_solve(Mat m, Vec rhs) {
  const auto n = m.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (m(pivot, col) == 0.0) throw std::runtime_error("gauss_solve: singular");
    m.row(col).swap(m.row(pivot));
    std::swap(rhs(col), rhs(pivot));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = m(r, col) / m(col, col);
      m.row(r) -= factor * m.row(col);
      rhs(r) -= factor * rhs(col);
    }
  }
  Vec x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double acc = rhs(r);
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= m(r, c) * x(c);
    x(r) = acc / m(r, r);
  }
  return x;
}

/// Caputo derivative of (t - a)^p, order alpha, evaluated at x > a:
///   Gamma(p+1) / Gamma(p+1-alpha) (x - a)^(p - alpha).
inline double caputo_power(double p, double a, double x, double alpha) {
  return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) * std::pow(x - a, p - alpha);
}

/// Test-local generator, independent of the library's streams.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  Vec vector(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Mat matrix(Eigen::Index r, Eigen::Index c, double lo, double hi) {
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
  /// M^T M / n + shift I.
  Mat spd(Eigen::Index n, double shift = 1.0) {
    const Mat m = matrix(n, n, -1.0, 1.0);
    return m.transpose() * m / static_cast<double>(n) + shift * Mat::Identity(n, n);
  }

 private:
  std::mt19937_64 engine_;
};

/// SPD matrix with prescribed eigenvalues spread geometrically over [1, cond].
inline Mat spd_with_condition(Draws& draws, Eigen::Index n, double cond) {
  const Mat q = Eigen::HouseholderQR<Mat>(draws.matrix(n, n, -1.0, 1.0)).householderQ();
  Vec eig(n);
  for (Eigen::Index i = 0; i < n; ++i)
    eig(i) = std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
  return q * eig.asDiagonal() * q.transpose();
}

/// Mean-squared-error loss of a 1-H-1 tanh network and its gradient by backpropagation.
/// Parameter layout [w_in(H), b_in(H), w_out(H), b_out].
struct BackpropResult {
  double loss = 0.0;
  Vec grad;
};

inline BackpropResult mlp_backprop(const Vec& p, const Vec& z, const Vec& y, int hidden) {
  const auto h = static_cast<Eigen::Index>(hidden);
  BackpropResult out;
  out.grad = Vec::Zero(p.size());
  const double n = static_cast<double>(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    std::vector<double> act(static_cast<std::size_t>(hidden));
    double pred = p(3 * h);
    for (Eigen::Index u = 0; u < h; ++u) {
      act[u] = std::tanh(p(u) * z(j) + p(h + u));
      pred += p(2 * h + u) * act[u];
    }
    const double e = pred - y(j);
    out.loss += e * e / n;
    const double de = 2.0 * e / n;
    out.grad(3 * h) += de;
    for (Eigen::Index u = 0; u < h; ++u) {
      out.grad(2 * h + u) += de * act[u];
      const double dpre = de * p(2 * h + u) * (1.0 - act[u] * act[u]);
      out.grad(u) += dpre * z(j);
      out.grad(h + u) += dpre;
    }
  }
  return out;
}

inline double max_relative_error(const Vec& got, const Vec& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got(i) - want(i)) / std::abs(want(i)));
  return worst;
}

}  // namespace cfcg::testing
