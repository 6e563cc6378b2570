#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cfcg/errors.hpp"
#include "cfcg/harness.hpp"
#include "cfcg/trace_io.hpp"

namespace cfcg {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cfcg_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string csv_without_timing(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows, false);
  return out.str();
}

ExperimentConfig small_example1(const fs::path& out) {
  ExperimentConfig c = default_config(ExperimentKind::Example1);
  c.m = c.n = 20;
  c.out = out;
  return c;
}

ExperimentConfig mini_example1(const fs::path& out) {
  ExperimentConfig c = default_config(ExperimentKind::Example1);
  c.seed = 3;
  c.m = c.n = 8;
  c.gamma_grid = {0.5, 2.0};
  c.beta_kinds = {BetaKind::FR, BetaKind::HS};
  c.out = out;
  return c;
}

ExperimentConfig mini_example2(const fs::path& out) {
  ExperimentConfig c = default_config(ExperimentKind::Example2);
  c.seed = 4;
  c.alpha_grid = {0.9};
  c.hidden = 4;
  c.points = 12;
  c.trials = 2;
  c.max_iter = 40;
  c.functions = {BenchmarkFn::H2};
  c.beta_kinds = {BetaKind::CD};
  c.out = out;
  return c;
}

void expect_golden(const std::string& actual, const std::string& file) {
  const fs::path path = fs::path(CFCG_GOLDEN_DIR) / file;
  if (std::getenv("CFCG_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    GTEST_SKIP() << "rewrote " << path;
  }
  ASSERT_TRUE(fs::exists(path)) << path << " missing; rerun with CFCG_UPDATE_GOLDEN=1";
  EXPECT_EQ(actual, slurp(path));
}

TEST(Example1Sweep, SixtyRowsPairedByBeta) {
  const auto out = scratch("rows");
  const auto rows = run_example1(small_example1(out));
  ASSERT_EQ(rows.size(), 60u);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_EQ(rows[i].solver, SolverKind::CFCG);
    EXPECT_EQ(rows[i + 1].solver, SolverKind::CFSD);
    EXPECT_EQ(rows[i].beta, rows[i + 1].beta);
    EXPECT_EQ(rows[i].gamma, rows[i + 1].gamma);
    EXPECT_TRUE(rows[i].final_distance.has_value());
    EXPECT_TRUE(fs::exists(out / "traces" / trace_name(rows[i])));
  }
  EXPECT_EQ(rows[0].gamma, 0.5);
  EXPECT_EQ(rows[59].gamma, 4.0);
  fs::remove_all(out);
}

TEST(Example1Sweep, TraceEndsAtReportedDistance) {
  const auto out = scratch("trace");
  const auto rows = run_example1(mini_example1(out));
  for (const auto& row : rows) {
    const auto trace = read_trace_file(out / "traces" / trace_name(row));
    ASSERT_FALSE(trace.empty());
    EXPECT_EQ(trace.back().k, static_cast<int>(row.iterations));
    EXPECT_EQ(trace.back().dist_to_reference, row.final_distance);
    EXPECT_EQ(trace.back().grad_norm, row.final_grad_norm);
    EXPECT_TRUE(check_trace(trace, {}, row.solver == SolverKind::CFCG).empty());
  }
  fs::remove_all(out);
}

TEST(Sweep, IndependentOfThreadCountAndRepeatable) {
  const auto out1 = scratch("t1");
  const auto out4 = scratch("t4");
  ExperimentConfig c1 = small_example1(out1);
  ExperimentConfig c4 = small_example1(out4);
  c4.threads = 4;
  const auto r1 = run_example1(c1);
  const auto r4 = run_example1(c4);
  EXPECT_EQ(csv_without_timing(r1), csv_without_timing(r4));
  for (const auto& entry : fs::directory_iterator(out1 / "traces"))
    EXPECT_EQ(slurp(entry.path()), slurp(out4 / "traces" / entry.path().filename()))
        << entry.path().filename();

  ExperimentConfig e2a = mini_example2(scratch("e2a"));
  ExperimentConfig e2b = mini_example2(scratch("e2b"));
  e2b.threads = 3;
  EXPECT_EQ(csv_without_timing(run_example2(e2a)), csv_without_timing(run_example2(e2b)));
  for (const auto& p : {out1, out4, e2a.out, e2b.out}) fs::remove_all(p);
}

TEST(Example2Sweep, SingleTrialMeansEqualSingleRun) {
  ExperimentConfig c = mini_example2(scratch("e2single"));
  c.trials = 1;
  const auto rows = run_example2(c);
  ASSERT_EQ(rows.size(), 2u);

  ExperimentConfig s = c;
  s.experiment = ExperimentKind::Single;
  s.problem = ProblemKind::Mlp;
  s.solvers = {SolverKind::CFCG};
  const SingleResult single = run_single(s);
  EXPECT_EQ(rows[0].iterations, single.row.iterations);
  EXPECT_EQ(rows[0].objective_evals, single.row.objective_evals);
  EXPECT_EQ(rows[0].gradient_evals, single.row.gradient_evals);
  EXPECT_EQ(rows[0].final_grad_norm, single.row.final_grad_norm);
  fs::remove_all(c.out);
}

TEST(Example2Sweep, FailedTrialsAreCountedInTheNote) {
  ExperimentConfig c = mini_example2(scratch("e2fail"));
  c.max_iter = 1;
  c.stop_rule = StopRule::Gradient;
  const auto rows = run_example2(c);
  for (const auto& row : rows) {
    EXPECT_EQ(row.status, "MaxIter");
    EXPECT_EQ(row.converged, 0);
    EXPECT_EQ(row.iterations, 1.0);
    EXPECT_EQ(row.note, "0/2 trials converged; means over 2 completed");
  }
  EXPECT_EQ(exit_code(rows), 1);
  fs::remove_all(c.out);
}

TEST(SingleRun, ConvergedTraceEndsBelowTolerance) {
  ExperimentConfig c = default_config(ExperimentKind::Single);
  c.m = c.n = 10;
  c.gamma_grid = {1.0};
  c.beta_kinds = {BetaKind::PRP};
  c.solvers = {SolverKind::CFCG};
  c.out = scratch("single");
  const SingleResult r = run_single(c);
  EXPECT_EQ(r.row.status, "Converged");
  EXPECT_EQ(exit_code({r.row}), 0);
  const auto trace = read_trace_file(c.out / "traces" / trace_name(r.row));
  EXPECT_LT(trace.back().grad_norm, c.tol);
  EXPECT_TRUE(check_trace(trace, c.line_search).empty());
  fs::remove_all(c.out);
}

TEST(SingleRun, MaxIterOneIsNonzeroExit) {
  ExperimentConfig c = default_config(ExperimentKind::Single);
  c.gamma_grid = {0.5};
  c.beta_kinds = {BetaKind::FR};
  c.solvers = {SolverKind::CFSD};
  c.max_iter = 1;
  c.traces = false;
  c.out = scratch("single_max");
  const SingleResult r = run_single(c);
  EXPECT_EQ(r.row.status, "MaxIter");
  EXPECT_EQ(exit_code({r.row}), 1);
}

TEST(SingleRun, RequiresOneOfEach) {
  ExperimentConfig c = default_config(ExperimentKind::Single);
  c.traces = false;
  c.out = scratch("single_bad");
  EXPECT_THROW(run_single(c), ConfigError);
  c.solvers = {SolverKind::CFCG};
  c.beta_kinds = {BetaKind::FR};
  EXPECT_THROW(run_single(c), ConfigError);  // six gammas
  c.gamma_grid = {1.0};
  c.alpha_grid = {0.5, 0.9};
  EXPECT_THROW(run_single(c), ConfigError);
}

TEST(Results, CsvHeaderAndJsonKeys) {
  ResultRow row;
  row.experiment = "example1";
  row.problem = "tikhonov";
  row.status = "Converged";
  row.note = "a, \"quoted\" note";
  std::ostringstream csv;
  write_results_csv(csv, {row});
  std::string header;
  std::istringstream in(csv.str());
  std::getline(in, header);
  std::string want;
  for (auto col : kResultColumns) want += (want.empty() ? "" : ",") + std::string(col);
  EXPECT_EQ(header, want);
  EXPECT_NE(csv.str().find("\"a, \"\"quoted\"\" note\""), std::string::npos);

  std::ostringstream json;
  write_results_json(json, {row});
  std::size_t pos = 0;
  for (auto col : kResultColumns) {
    const auto at = json.str().find("\"" + std::string(col) + "\"", pos);
    ASSERT_NE(at, std::string::npos) << col;
    pos = at;
  }
  EXPECT_NE(json.str().find("\"gamma\": null"), std::string::npos);
}

TEST(Results, WriteResultsPicksFileByFormat) {
  ExperimentConfig c;
  c.out = scratch("write");
  EXPECT_EQ(write_results(c, {}).filename(), "results.csv");
  c.format = OutputFormat::Json;
  EXPECT_EQ(write_results(c, {}).filename(), "results.json");
  EXPECT_EQ(slurp(c.out / "results.json"), "[]\n");
  fs::remove_all(c.out);
}

TEST(Golden, MiniatureExample1Csv) {
  const auto out = scratch("golden1");
  expect_golden(csv_without_timing(run_example1(mini_example1(out))), "mini_example1.csv");
  fs::remove_all(out);
}

TEST(Golden, MiniatureExample2Json) {
  const auto out = scratch("golden2");
  std::ostringstream json;
  write_results_json(json, run_example2(mini_example2(out)), false);
  expect_golden(json.str(), "mini_example2.json");
  fs::remove_all(out);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsTaskErrors) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw Error("boom");
                            }),
               Error);
}

}  // namespace
}  // namespace cfcg
