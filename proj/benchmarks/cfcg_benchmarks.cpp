#include <benchmark/benchmark.h>

#include "cfcg/cg_engine.hpp"
#include "cfcg/fractional.hpp"
#include "cfcg/problems.hpp"
#include "cfcg/tikhonov.hpp"

namespace {

using namespace cfcg;

void BM_CaputoDerivative(benchmark::State& state) {
  QuadratureSpec spec;
  spec.node_count = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        caputo_derivative([](double t) { return 3.0 * t * t; }, 0.0, 1.5, 0.9, spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CaputoDerivative)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_QuadraticGradient(benchmark::State& state) {
  const auto n = state.range(0);
  Example1Config gen;
  gen.m = gen.n = static_cast<int>(n);
  const auto inst = gen_example1(gen);
  const FracParams p{0.9, 0.1, inst.c};
  for (auto _ : state)
    benchmark::DoNotOptimize(frac_gradient_quadratic(inst.problem.A, inst.problem.b, inst.x0, p));
}
BENCHMARK(BM_QuadraticGradient)->Arg(30)->Arg(100)->Arg(300);

void BM_GeneralGradient(benchmark::State& state) {
  const Eigen::Index n = 10;
  const Mat a = Mat::Identity(n, n) * 2.0;
  const auto f = [&](const Vec& v) { return 0.5 * v.dot(a * v); };
  const FracParams p{0.9, 0.1, Vec::Zero(n)};
  QuadratureSpec spec;
  spec.node_count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frac_gradient_general(f, Vec::Ones(n), p, spec));
}
BENCHMARK(BM_GeneralGradient)->Arg(256)->Arg(2000);

void BM_MlpGradient(benchmark::State& state) {
  MlpSpec spec;
  spec.hidden_units = static_cast<int>(state.range(0));
  spec.train_points = 50;
  const Objective f = mlp_objective(spec, BenchmarkFn::H2, 1);
  const Vec x = mlp_initial_point(spec, 1);
  const FracParams p{0.9, 0.1, mlp_lower_terminal(spec)};
  QuadratureSpec q;
  q.node_count = 256;
  for (auto _ : state) benchmark::DoNotOptimize(f.peek_gradient(x, p, q));
}
BENCHMARK(BM_MlpGradient)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_CfcgTikhonov(benchmark::State& state) {
  Example1Config gen;
  gen.m = gen.n = static_cast<int>(state.range(0));
  const auto inst = gen_example1(gen);
  LeastSquaresProblem prob = inst.problem;
  prob.gamma = 1.0;
  SolverOptions opt;
  opt.frac = {0.9, 0.1, inst.c};
  opt.min_cos = 0.05;
  for (auto _ : state) {
    Objective f = tikhonov_objective(prob);
    benchmark::DoNotOptimize(cfcg_minimize(f, inst.x0, BetaKind::FR, {}, opt));
  }
}
BENCHMARK(BM_CfcgTikhonov)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
