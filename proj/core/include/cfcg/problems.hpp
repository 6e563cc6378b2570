#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "cfcg/objective.hpp"
#include "cfcg/tikhonov.hpp"

namespace cfcg {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Random Tikhonov least-squares instances.
struct Example1Config {
  std::uint64_t seed = 1;
  int m = 100;
  int n = 100;
  Interval entry_range{-1.0, 1.0};
  Interval x0_range{1.0, 10.0};
  double c_value = 1.0;
  std::vector<double> gamma_grid{0.5, 0.75, 1.0, 2.0, 3.0, 4.0};
};

struct Example1Instance {
  LeastSquaresProblem problem;  // Example1Form, gamma = 0, x_bar = c
  Vec x0;
  Vec c;
};

/// X in R^{n x m} and y in R^n uniform on entry_range (Problem stream), A = X X^T,
/// b = -A y; x0 uniform on x0_range (StartPoint stream); c = c_value * ones.
Example1Instance gen_example1(const Example1Config& config);

enum class BenchmarkFn { H1, H2, H3 };

std::string_view to_string(BenchmarkFn id);
BenchmarkFn parse_benchmark_fn(std::string_view name);

/// h1 = sin(5 pi z), h2 = sin(2 pi z) exp(-z^2), h3 = 1{z > 0} + 0.2 sin(2 pi z).
double benchmark_fn(BenchmarkFn id, double z);

/// 1-H-1 tanh regression network trained by mean squared error.
struct MlpSpec {
  int hidden_units = 60;
  int train_points = 100;
  Interval input_interval{-1.0, 1.0};
  int trials = 5;
  std::vector<double> alpha_grid{0.5, 0.6, 0.7, 0.8, 0.9};

  /// 3H + 1 parameters laid out as
  ///   [w_in(0..H-1), b_in(0..H-1), w_out(0..H-1), b_out].
  Eigen::Index parameter_count() const { return 3 * static_cast<Eigen::Index>(hidden_units) + 1; }
  void validate() const;
};

/// Training set and forward pass of the network.
class MlpModel {
 public:
  MlpModel(const MlpSpec& spec, const std::function<double(double)>& target,
           std::uint64_t data_seed);

  const Vec& inputs() const noexcept { return inputs_; }
  const Vec& targets() const noexcept { return targets_; }
  int hidden_units() const noexcept { return hidden_; }

  Vec predict(const Vec& params) const;
  double loss(const Vec& params) const;
  /// Loss as a function of parameter i alone, others frozen at params. Each call of the
  /// returned function costs O(train_points) instead of O(train_points * H).
  ScalarFn coordinate_line(const Vec& params, Eigen::Index i) const;
  /// d loss / d params(i) along the same line, by the chain rule.
  ScalarFn coordinate_slope(const Vec& params, Eigen::Index i) const;

 private:
  int hidden_;
  Vec inputs_;
  Vec targets_;
};

/// Objective wrapping MlpModel::loss, with the coordinate-line and slope hooks attached.
Objective mlp_objective(const MlpSpec& spec, BenchmarkFn target, std::uint64_t data_seed);
Objective mlp_objective(const MlpSpec& spec, const std::function<double(double)>& target,
                        std::uint64_t data_seed);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization from the Weights stream.
Vec mlp_initial_point(const MlpSpec& spec, std::uint64_t seed);

/// Lower terminal one unit below each parameter's initialization interval.
Vec mlp_lower_terminal(const MlpSpec& spec);

}  // namespace cfcg
