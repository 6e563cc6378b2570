#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfcg/config.hpp"

namespace cfcg {

/// One cell of a sweep. Example 2 rows hold means over trials, so the counters are reals.
/// In Example 1 the CFSD run of each (alpha, gamma) is repeated once per beta kind so every
/// CFCG row has a CFSD partner with the same beta label.
struct ResultRow {
  std::string experiment;
  std::string problem;  // "tikhonov" or a benchmark function name
  SolverKind solver = SolverKind::CFCG;
  BetaKind beta = BetaKind::FR;
  double alpha = 0.0;
  double rho = 0.0;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  std::string status;  // Converged, MaxIter, LineSearchFailure or Error
  double iterations = 0.0;
  double objective_evals = 0.0;
  double gradient_evals = 0.0;
  double final_grad_norm = 0.0;
  std::optional<double> final_distance;  // to the Tikhonov solution
  int trials = 1;
  int converged = 0;
  std::string note;
  double wall_ms = 0.0;
};

/// CSV header and JSON keys, in order. wall_ms is always last.
inline constexpr std::array<std::string_view, 19> kResultColumns = {
    "experiment", "problem",         "solver",      "beta",           "alpha",
    "rho",        "gamma",           "seed",        "status",         "iterations",
    "objective_evals", "gradient_evals", "final_grad_norm", "final_distance", "trials",
    "converged",  "note",            "trace",       "wall_ms"};

/// Relative trace path of a row ("" for aggregated rows).
std::string trace_name(const ResultRow& row, int trial = -1);

/// Example 1: one shared seeded instance; for every alpha, gamma and beta one CFCG row and
/// one CFSD row. Traces record the distance to the Tikhonov solution of each gamma.
std::vector<ResultRow> run_example1(const ExperimentConfig& config);

/// Example 2: per (alpha, function, beta) the mean over trials of each solver. Trial t uses
/// derive_seed(seed, t) for its data and initial weights, shared by every cell.
std::vector<ResultRow> run_example2(const ExperimentConfig& config);

struct SingleResult {
  ResultRow row;
  RunReport report;
};

/// One solver, one beta, one alpha and one problem (gamma or function) from the config.
/// Throws ConfigError when the config names more than one of any of these.
SingleResult run_single(const ExperimentConfig& config);

/// Dispatches on config.experiment (single runs yield one row).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// 0 when every row converged, 1 otherwise.
int exit_code(const std::vector<ResultRow>& rows);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool include_timing = true);
void write_results_json(std::ostream& out, const std::vector<ResultRow>& rows,
                        bool include_timing = true);
/// Writes <out>/results.csv or <out>/results.json; returns the file written.
std::filesystem::path write_results(const ExperimentConfig& config,
                                    const std::vector<ResultRow>& rows);

/// Runs task(i) for i in [0, count) on up to `threads` workers. Exceptions from tasks are
/// rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

}  // namespace cfcg
