#include "cfcg/rng.hpp"

#include <cmath>
#include <numbers>

namespace cfcg {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, StreamId stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, StreamId stream, std::uint64_t index)
    : engine_(make_engine(seed, stream, index)) {}

double RandomStream::canonical() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open(double lo, double hi) {
  double u = canonical();
  while (u == 0.0) u = canonical();
  return lo + (hi - lo) * u;
}

Eigen::VectorXd RandomStream::uniform_vector(Eigen::Index n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform_open(lo, hi);
  return v;
}

Eigen::MatrixXd RandomStream::uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo,
                                             double hi) {
  // Row-major fill order so the draw sequence does not depend on Eigen's storage order.
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform_open(lo, hi);
  return m;
}

double RandomStream::normal() {
  const double u1 = uniform_open(0.0, 1.0);
  const double u2 = canonical();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cfcg
