#include <gtest/gtest.h>

#include "cfcg/errors.hpp"
#include "cfcg/problems.hpp"
#include "cfcg/tikhonov.hpp"
#include "test_support.hpp"

namespace cfcg {
namespace {

using testing::Draws;
using testing::gauss_solve;

/// Stacked normal equations (X X^T + gamma Rbar Rbar^T) x = X t + gamma Rbar Rbar^T x_bar,
/// with Rbar read off X directly.
Vec normal_equation_oracle(const Mat& x, const Vec& t, double gamma, const Vec& x_bar) {
  const Mat a = x * x.transpose();
  Mat m = a;
  Vec rhs = x * t;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    m(i, i) += gamma * a(i, i);
    rhs(i) += gamma * a(i, i) * x_bar(i);
  }
  return gauss_solve(m, rhs);
}

TEST(BuildQuadratic, IdentityData) {
  const Vec y = (Vec(3) << 1, 2, 3).finished();
  for (auto conv : {BConvention::SectionForm, BConvention::Example1Form}) {
    const auto p = build_quadratic(Mat::Identity(3, 3), y, conv);
    EXPECT_EQ(p.A, Mat::Identity(3, 3));
    EXPECT_EQ(p.b, -y);
    EXPECT_EQ(p.r_bar, Vec::Ones(3));
  }
}

TEST(BuildQuadratic, ConventionsDiffer) {
  Mat x(2, 2);
  x << 2, 0, 0, 0.5;
  const Vec y = Vec::Ones(2);
  EXPECT_EQ(build_quadratic(x, y, BConvention::SectionForm).b, (Vec(2) << -2, -0.5).finished());
  EXPECT_EQ(build_quadratic(x, y, BConvention::Example1Form).b,
            (Vec(2) << -4, -0.25).finished());
}

TEST(BuildQuadratic, QuadraticMatchesLeastSquares) {
  Draws draws(41);
  const Mat x = draws.matrix(4, 6, -1, 1);
  const Vec y = draws.vector(6, -1, 1);
  const auto p = build_quadratic(x, y, BConvention::SectionForm);
  const Vec v = draws.vector(4, -2, 2);
  EXPECT_NEAR(0.5 * v.dot(p.A * v) + p.b.dot(v) + p.c_quad,
              0.5 * (x.transpose() * v - y).squaredNorm(), 1e-12);
}

TEST(BuildQuadratic, DimensionErrors) {
  EXPECT_THROW(build_quadratic(Mat::Identity(3, 2), Vec::Ones(3), BConvention::SectionForm),
               DimensionMismatch);
  EXPECT_THROW(build_quadratic(Mat::Identity(3, 2), Vec::Ones(2), BConvention::Example1Form),
               DimensionMismatch);
  EXPECT_THROW(build_quadratic(Mat(0, 0), Vec(0), BConvention::SectionForm), DimensionMismatch);
}

TEST(TikhonovSolution, ZeroGammaIgnoresAnchor) {
  Draws draws(42);
  const Mat x = draws.matrix(5, 5, -1, 1);
  const Vec y = draws.vector(5, -1, 1);
  auto p = build_quadratic(x, y, BConvention::SectionForm);
  p.x_bar = draws.vector(5, -3, 3);
  const Vec want = gauss_solve(x * x.transpose(), x * y);
  EXPECT_LT((tikhonov_solution(p) - want).norm() / want.norm(), 1e-10);
}

TEST(TikhonovSolution, LargeGammaPullsToAnchor) {
  Draws draws(43);
  auto p = build_quadratic(draws.matrix(5, 5, -1, 1), draws.vector(5, -1, 1),
                           BConvention::SectionForm);
  p.x_bar = draws.vector(5, -3, 3);
  p.gamma = 1e12;
  EXPECT_LT((tikhonov_solution(p) - p.x_bar).norm(), 1e-6);
}

TEST(TikhonovSolution, MatchesNormalEquationOracle) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Draws draws(100 + seed);
    const auto n = static_cast<Eigen::Index>(5 + 4 * seed);
    const Mat x = draws.matrix(n, n, -1, 1);
    const Vec y = draws.vector(n, -1, 1);
    auto p = build_quadratic(x, y, BConvention::Example1Form);
    p.gamma = draws.uniform(0.1, 4.0);
    p.x_bar = Vec::Ones(n);
    const Vec want = normal_equation_oracle(x, x.transpose() * y, p.gamma, p.x_bar);
    EXPECT_LT((tikhonov_solution(p) - want).norm() / want.norm(), 1e-8) << n;
  }
}

TEST(TikhonovSolution, GradientVanishesAtSolution) {
  for (int n : {10, 30, 50}) {
    Example1Config config;
    config.m = config.n = n;
    config.seed = static_cast<std::uint64_t>(n);
    auto inst = gen_example1(config);
    inst.problem.gamma = 0.75;
    const Vec sol = tikhonov_solution(inst.problem);
    const double scale = 1.0 + (inst.problem.X * inst.problem.target()).norm();
    EXPECT_LE(regularized_gradient(inst.problem, sol).norm(), 1e-8 * scale) << n;
  }
}

TEST(TikhonovSolution, AnchorPullIsMonotoneInGamma) {
  auto inst = gen_example1({});
  double previous = std::numeric_limits<double>::infinity();
  for (double gamma : {0.5, 0.75, 1.0, 2.0, 3.0, 4.0}) {
    inst.problem.gamma = gamma;
    const double dist = (tikhonov_solution(inst.problem) - inst.problem.x_bar).norm();
    EXPECT_LE(dist, previous) << gamma;
    previous = dist;
  }
}

TEST(TikhonovSolution, SingularSystem) {
  auto p = build_quadratic(Mat::Zero(3, 3), Vec::Ones(3), BConvention::SectionForm);
  p.gamma = 1.0;
  EXPECT_THROW(tikhonov_solution(p), SingularSystem);
}

TEST(RegularizedObjective, SpecialValues) {
  Draws draws(44);
  const Mat x = draws.matrix(4, 4, -1, 1);
  const Vec x_bar = draws.vector(4, -1, 1);
  auto p = build_quadratic(x, x.transpose() * x_bar, BConvention::SectionForm);
  p.x_bar = x_bar;
  p.gamma = 2.0;
  EXPECT_NEAR(regularized_objective(p, x_bar), 0.0, 1e-24);
  p.gamma = 0.0;
  const Vec v = draws.vector(4, -1, 1);
  EXPECT_DOUBLE_EQ(regularized_objective(p, v), (x.transpose() * v - p.y).squaredNorm());
}

TEST(RegularizedObjective, GradientMatchesFiniteDifferences) {
  Draws draws(45);
  auto p = build_quadratic(draws.matrix(6, 6, -1, 1), draws.vector(6, -1, 1),
                           BConvention::Example1Form);
  p.gamma = 1.5;
  p.x_bar = Vec::Ones(6);
  const Vec v = draws.vector(6, -2, 2);
  Vec fd(6);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < 6; ++i) {
    Vec up = v, down = v;
    up(i) += h;
    down(i) -= h;
    fd(i) = (regularized_objective(p, up) - regularized_objective(p, down)) / (2 * h);
  }
  const Vec g = regularized_gradient(p, v);
  EXPECT_LT((fd - g).norm() / g.norm(), 1e-5);
}

TEST(Abar, PositiveDefiniteness) {
  auto eye = build_quadratic(Mat::Identity(3, 3), Vec::Ones(3), BConvention::SectionForm);
  const FracParams p{0.9, 0.1, Vec::Zero(3)};
  EXPECT_TRUE(check_abar_pd(eye, p));
  EXPECT_TRUE(abar_matrix(eye, p).isApprox((1.0 + 1.0 / 110.0) * Mat::Identity(3, 3), 1e-15));

  auto zero = build_quadratic(Mat::Zero(3, 3), Vec::Ones(3), BConvention::SectionForm);
  EXPECT_FALSE(check_abar_pd(zero, {0.5, 0.0, Vec::Zero(3)}));

  Draws draws(46);
  auto full = build_quadratic(draws.matrix(5, 8, -1, 1), draws.vector(8, -1, 1),
                              BConvention::SectionForm);
  EXPECT_TRUE(check_abar_pd(full, {0.9, 0.1, Vec::Zero(5)}));
}

TEST(Abar, DiffersFromRegularizedMatrix) {
  Draws draws(47);
  auto p = build_quadratic(draws.matrix(4, 4, -1, 1), draws.vector(4, -1, 1),
                           BConvention::SectionForm);
  p.gamma = 1.0;
  const FracParams f{0.9, 0.1, Vec::Zero(4)};
  const Mat reg = regularized_matrix(p);
  const Mat abar = abar_matrix(p, f);
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(reg(i, i), 2.0 * p.A(i, i), 1e-14);
    EXPECT_NEAR(abar(i, i), p.A(i, i) + (0.1 - 0.1 / 1.1) * std::sqrt(p.A(i, i)), 1e-14);
  }
}

TEST(TikhonovObjective, HalfOfRegularizedObjective) {
  Draws draws(48);
  auto p = build_quadratic(draws.matrix(6, 6, -1, 1), draws.vector(6, -1, 1),
                           BConvention::Example1Form);
  p.gamma = 2.0;
  p.x_bar = Vec::Ones(6);
  Objective f = tikhonov_objective(p);
  const Vec v = draws.vector(6, -3, 3);
  EXPECT_NEAR(f.value(v), 0.5 * regularized_objective(p, v), 1e-12);
  // Classical limit of the closed-form gradient is half the analytic gradient.
  const FracParams classical{1.0 - 1e-12, 0.0, Vec::Zero(6)};
  EXPECT_LT((f.peek_gradient(v, classical, {}) - 0.5 * regularized_gradient(p, v)).norm(), 1e-9);
}

TEST(TikhonovObjective, FixedPointZeroesTheGradient) {
  auto inst = gen_example1({.seed = 3, .m = 20, .n = 20});
  inst.problem.gamma = 1.0;
  const FracParams frac{0.9, 0.1, inst.c};
  Objective f = tikhonov_objective(inst.problem);
  const Vec fixed = fractional_fixed_point(inst.problem, frac);
  EXPECT_LT(f.peek_gradient(fixed, frac, {}).norm(), 1e-9);
  // Unless the correction vanishes there, the fixed point is not the Tikhonov solution.
  EXPECT_GT((fixed - tikhonov_solution(inst.problem)).norm(), 1e-4);
}

}  // namespace
}  // namespace cfcg
