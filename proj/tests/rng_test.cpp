#include <set>

#include <gtest/gtest.h>

#include "cfcg/rng.hpp"

namespace cfcg {
namespace {

TEST(RandomStream, SameSeedSameDraws) {
  RandomStream a(42, StreamId::Problem);
  RandomStream b(42, StreamId::Problem);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, StreamsAreIndependent) {
  RandomStream a(42, StreamId::Problem);
  RandomStream b(42, StreamId::StartPoint);
  RandomStream c(42, StreamId::Problem, 1);
  const auto first = a.next_u64();
  EXPECT_NE(first, b.next_u64());
  EXPECT_NE(first, c.next_u64());
}

TEST(RandomStream, ReDrawingOneStreamLeavesAnotherUntouched) {
  RandomStream problem(7, StreamId::Problem);
  const Eigen::MatrixXd m1 = problem.uniform_matrix(4, 4, -1, 1);
  RandomStream start(7, StreamId::StartPoint);
  start.uniform_vector(100, 1, 10);
  RandomStream problem_again(7, StreamId::Problem);
  EXPECT_EQ(m1, problem_again.uniform_matrix(4, 4, -1, 1));
}

TEST(RandomStream, UniformOpenStaysInsideInterval) {
  RandomStream s(3, StreamId::Dataset);
  for (int i = 0; i < 10000; ++i) {
    const double v = s.uniform_open(1.0, 10.0);
    EXPECT_GT(v, 1.0);
    EXPECT_LT(v, 10.0);
  }
}

TEST(RandomStream, CanonicalMeanAndRange) {
  RandomStream s(5, StreamId::Weights);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.canonical();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5e-3);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(9, StreamId::Weights);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 1e-2);
  EXPECT_NEAR(sq / n, 1.0, 2e-2);
}

TEST(DeriveSeed, DistinctPerIndexAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(1, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

}  // namespace
}  // namespace cfcg
