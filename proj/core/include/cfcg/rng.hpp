#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace cfcg {

/// Named sub-streams of one experiment seed. Each stream is reproducible on its own,
/// so e.g. re-drawing x0 never perturbs the problem matrix.
enum class StreamId : std::uint32_t {
  Problem = 1,
  StartPoint = 2,
  Dataset = 3,
  Weights = 4,
};

/// Portable seeded generator: mt19937_64 (bit-exact across standard libraries) seeded
/// through std::seed_seq, with doubles built from the top 53 bits. std::uniform_real_distribution
/// is deliberately not used because its output is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamId stream, std::uint64_t index = 0);

  /// Uniform on [0, 1).
  double canonical();
  /// Uniform on (lo, hi); endpoints are never returned.
  double uniform_open(double lo, double hi);
  std::uint64_t next_u64() { return engine_(); }

  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi);
  Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi);
  /// Standard normal via Box-Muller on canonical() draws.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Mix (seed, index) into a derived seed, e.g. one per trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace cfcg
