#include "cfcg/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "cfcg/errors.hpp"
#include "cfcg/rng.hpp"

namespace cfcg {

Example1Instance gen_example1(const Example1Config& config) {
  if (config.m <= 0 || config.n <= 0) throw DomainError("example1: m and n must be positive");
  RandomStream problem_rng(config.seed, StreamId::Problem);
  Mat X = problem_rng.uniform_matrix(config.n, config.m, config.entry_range.lo,
                                     config.entry_range.hi);
  Vec y = problem_rng.uniform_vector(config.n, config.entry_range.lo, config.entry_range.hi);

  RandomStream start_rng(config.seed, StreamId::StartPoint);
  Example1Instance out{build_quadratic(std::move(X), std::move(y), BConvention::Example1Form),
                       start_rng.uniform_vector(config.n, config.x0_range.lo, config.x0_range.hi),
                       Vec::Constant(config.n, config.c_value)};
  out.problem.x_bar = out.c;
  return out;
}

std::string_view to_string(BenchmarkFn id) {
  switch (id) {
    case BenchmarkFn::H1: return "h1";
    case BenchmarkFn::H2: return "h2";
    case BenchmarkFn::H3: return "h3";
  }
  return "?";
}

BenchmarkFn parse_benchmark_fn(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (BenchmarkFn id : {BenchmarkFn::H1, BenchmarkFn::H2, BenchmarkFn::H3})
    if (lower == to_string(id)) return id;
  throw DomainError("unknown benchmark function '" + std::string(name) + "' (expected h1, h2, h3)");
}

double benchmark_fn(BenchmarkFn id, double z) {
  using std::numbers::pi;
  switch (id) {
    case BenchmarkFn::H1: return std::sin(5.0 * pi * z);
    case BenchmarkFn::H2: return std::sin(2.0 * pi * z) * std::exp(-z * z);
    case BenchmarkFn::H3: return (z > 0.0 ? 1.0 : 0.0) + 0.2 * std::sin(2.0 * pi * z);
  }
  return 0.0;
}

void MlpSpec::validate() const {
  if (hidden_units <= 0) throw DomainError("hidden_units must be positive");
  if (train_points <= 0) throw DomainError("train_points must be positive");
  if (trials <= 0) throw DomainError("trials must be positive");
  if (!(input_interval.lo < input_interval.hi)) throw DomainError("input interval is empty");
}

MlpModel::MlpModel(const MlpSpec& spec, const std::function<double(double)>& target,
                   std::uint64_t data_seed)
    : hidden_(spec.hidden_units) {
  spec.validate();
  RandomStream rng(data_seed, StreamId::Dataset);
  inputs_ = rng.uniform_vector(spec.train_points, spec.input_interval.lo, spec.input_interval.hi);
  targets_ = inputs_.unaryExpr(target);
}

Vec MlpModel::predict(const Vec& params) const {
  const auto h = static_cast<Eigen::Index>(hidden_);
  const auto w_in = params.segment(0, h);
  const auto b_in = params.segment(h, h);
  const auto w_out = params.segment(2 * h, h);
  const double b_out = params(3 * h);
  // (points x H) activations
  const Mat act = ((inputs_ * w_in.transpose()).rowwise() + b_in.transpose()).array().tanh();
  return (act * w_out).array() + b_out;
}

double MlpModel::loss(const Vec& params) const {
  return (predict(params) - targets_).squaredNorm() / static_cast<double>(targets_.size());
}

ScalarFn MlpModel::coordinate_line(const Vec& params, Eigen::Index i) const {
  const auto h = static_cast<Eigen::Index>(hidden_);
  const double points = static_cast<double>(targets_.size());
  Vec residual = predict(params) - targets_;

  if (i == 3 * h) {
    // bias of the output unit: prediction shifts by (t - b_out)
    residual.array() -= params(i);
    return [residual = std::move(residual), points](double t) {
      return (residual.array() + t).square().sum() / points;
    };
  }

  const Eigen::Index unit = i % h;
  const double w = params(unit);
  const double b = params(h + unit);
  const double v = params(2 * h + unit);
  Vec activation = (inputs_.array() * w + b).tanh();
  Vec rest = residual - v * activation;  // residual with unit's contribution removed

  switch (i / h) {
    case 0:
      return [rest = std::move(rest), z = inputs_, b, v, points](double t) {
        return (rest.array() + v * (z.array() * t + b).tanh()).square().sum() / points;
      };
    case 1:
      return [rest = std::move(rest), z = inputs_, w, v, points](double t) {
        return (rest.array() + v * (z.array() * w + t).tanh()).square().sum() / points;
      };
    default:
      return [rest = std::move(rest), act = std::move(activation), points](double t) {
        return (rest.array() + t * act.array()).square().sum() / points;
      };
  }
}

ScalarFn MlpModel::coordinate_slope(const Vec& params, Eigen::Index i) const {
  const auto h = static_cast<Eigen::Index>(hidden_);
  const double scale = 2.0 / static_cast<double>(targets_.size());
  Vec residual = predict(params) - targets_;

  if (i == 3 * h) {
    residual.array() -= params(i);
    return [residual = std::move(residual), scale](double t) {
      return scale * (residual.array() + t).sum();
    };
  }

  const Eigen::Index unit = i % h;
  const double w = params(unit);
  const double b = params(h + unit);
  const double v = params(2 * h + unit);
  Vec activation = (inputs_.array() * w + b).tanh();
  Vec rest = residual - v * activation;

  switch (i / h) {
    case 0:
      return [rest = std::move(rest), z = inputs_, b, v, scale](double t) {
        const Eigen::ArrayXd a = (z.array() * t + b).tanh();
        return scale * ((rest.array() + v * a) * v * (1.0 - a.square()) * z.array()).sum();
      };
    case 1:
      return [rest = std::move(rest), z = inputs_, w, v, scale](double t) {
        const Eigen::ArrayXd a = (z.array() * w + t).tanh();
        return scale * ((rest.array() + v * a) * v * (1.0 - a.square())).sum();
      };
    default:
      return [rest = std::move(rest), act = std::move(activation), scale](double t) {
        return scale * ((rest.array() + t * act.array()) * act.array()).sum();
      };
  }
}

Objective mlp_objective(const MlpSpec& spec, const std::function<double(double)>& target,
                        std::uint64_t data_seed) {
  auto model = std::make_shared<const MlpModel>(spec, target, data_seed);
  Objective f([model](const Vec& p) { return model->loss(p); }, spec.parameter_count());
  f.with_coordinate_line(
      [model](const Vec& p, Eigen::Index i) { return model->coordinate_line(p, i); });
  f.with_coordinate_slope(
      [model](const Vec& p, Eigen::Index i) { return model->coordinate_slope(p, i); });
  return f;
}

Objective mlp_objective(const MlpSpec& spec, BenchmarkFn target, std::uint64_t data_seed) {
  return mlp_objective(spec, [target](double z) { return benchmark_fn(target, z); }, data_seed);
}

namespace {

Vec init_bounds(const MlpSpec& spec) {
  const auto h = static_cast<Eigen::Index>(spec.hidden_units);
  Vec bound(spec.parameter_count());
  bound.head(2 * h).setConstant(1.0);  // input layer, fan_in = 1
  bound.tail(h + 1).setConstant(1.0 / std::sqrt(static_cast<double>(spec.hidden_units)));
  return bound;
}

}  // namespace

Vec mlp_initial_point(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  RandomStream rng(seed, StreamId::Weights);
  const Vec bound = init_bounds(spec);
  Vec p(bound.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.uniform_open(-bound(i), bound(i));
  return p;
}

Vec mlp_lower_terminal(const MlpSpec& spec) {
  spec.validate();
  return -init_bounds(spec).array() - 1.0;
}

}  // namespace cfcg
