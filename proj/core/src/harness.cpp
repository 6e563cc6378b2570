#include "cfcg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cfcg/errors.hpp"
#include "cfcg/rng.hpp"
#include "cfcg/trace_io.hpp"

namespace cfcg {
namespace {

using Clock = std::chrono::steady_clock;

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

SolverOptions solver_options(const ExperimentConfig& config, double alpha, Vec c) {
  SolverOptions opt;
  opt.frac = FracParams{alpha, config.rho, std::move(c)};
  opt.quadrature.node_count = config.node_count;
  opt.stop = config.stop_criteria();
  opt.min_cos = config.min_cos;
  return opt;
}

struct CellOutcome {
  std::string status;
  std::string note;
  RunReport report;
  bool ok = false;
  double wall_ms = 0.0;
};

// Runs one solver, converting library errors into an "Error" status.
CellOutcome run_cell(Objective& f, const Vec& x0, SolverKind solver, BetaKind beta,
                     const StepRule& rule, const LineSearchParams& ls,
                     const SolverOptions& options) {
  CellOutcome out;
  const auto t0 = Clock::now();
  try {
    out.report = solver == SolverKind::CFCG ? cfcg_minimize(f, x0, beta, ls, options)
                                            : cfsd_minimize(f, x0, rule, options);
    out.status = std::string(to_string(out.report.status));
    out.note = out.report.note;
    out.ok = true;
  } catch (const Error& e) {
    out.status = "Error";
    out.note = e.what();
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return out;
}

void fill_from(ResultRow& row, const CellOutcome& cell) {
  row.status = cell.status;
  row.note = cell.note;
  row.wall_ms = cell.wall_ms;
  row.trials = 1;
  row.converged = cell.status == "Converged" ? 1 : 0;
  if (!cell.ok) return;
  const auto& r = cell.report;
  row.iterations = r.iterations;
  row.objective_evals = static_cast<double>(r.objective_evals);
  row.gradient_evals = static_cast<double>(r.gradient_evals);
  row.final_grad_norm = r.final_grad_norm;
  if (!r.trace.empty() && r.trace.back().dist_to_reference)
    row.final_distance = r.trace.back().dist_to_reference;
}

void save_trace(const ExperimentConfig& config, const std::string& name, const CellOutcome& cell) {
  if (!config.traces || !cell.ok) return;
  write_trace_file(config.out / "traces" / name, cell.report.trace);
}

void prepare_output(const ExperimentConfig& config) {
  if (config.traces) std::filesystem::create_directories(config.out / "traces");
}

std::string solver_tag(SolverKind solver, BetaKind beta) {
  return solver == SolverKind::CFCG ? "CFCG_" + std::string(to_string(beta)) : "CFSD";
}

bool wants(const ExperimentConfig& config, SolverKind solver) {
  for (SolverKind s : config.solvers)
    if (s == solver) return true;
  return false;
}

}  // namespace

std::string trace_name(const ResultRow& row, int trial) {
  const std::string tag = solver_tag(row.solver, row.beta);
  if (row.experiment == "example1")
    return "ex1_a" + short_real(row.alpha) + "_g" + short_real(row.gamma.value_or(0.0)) + "_" +
           tag + ".csv";
  if (row.experiment == "example2")
    return "ex2_" + row.problem + "_a" + short_real(row.alpha) + "_" + tag + "_t" +
           (trial < 0 ? std::string("*") : std::to_string(trial)) + ".csv";
  return "single_" + row.problem + "_" + tag + ".csv";
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<ResultRow> run_example1(const ExperimentConfig& config) {
  config.validate();
  prepare_output(config);

  Example1Config gen;
  gen.seed = config.seed;
  gen.m = config.m;
  gen.n = config.n;
  gen.gamma_grid = config.gamma_grid;
  const Example1Instance inst = gen_example1(gen);

  struct Cell {
    double alpha;
    double gamma;
    SolverKind solver;
    BetaKind beta;
  };
  std::vector<Cell> cells;
  for (double alpha : config.alpha_grid)
    for (double gamma : config.gamma_grid) {
      if (wants(config, SolverKind::CFSD))
        cells.push_back({alpha, gamma, SolverKind::CFSD, BetaKind::FR});
      if (wants(config, SolverKind::CFCG))
        for (BetaKind beta : config.beta_kinds)
          cells.push_back({alpha, gamma, SolverKind::CFCG, beta});
    }

  std::vector<ResultRow> results(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    LeastSquaresProblem prob = inst.problem;
    prob.gamma = cell.gamma;
    Objective f = tikhonov_objective(prob);
    SolverOptions opt = solver_options(config, cell.alpha, inst.c);
    opt.reference = tikhonov_solution(prob);

    ResultRow& row = results[i];
    row.experiment = "example1";
    row.problem = "tikhonov";
    row.solver = cell.solver;
    row.beta = cell.beta;
    row.alpha = cell.alpha;
    row.rho = config.rho;
    row.gamma = cell.gamma;
    row.seed = config.seed;
    const CellOutcome out = run_cell(f, inst.x0, cell.solver, cell.beta,
                                     FixedStep{config.cfsd_step}, config.line_search, opt);
    fill_from(row, out);
    save_trace(config, trace_name(row), out);
  });

  // Row order: alpha, gamma, beta, then CFCG before its CFSD partner.
  std::vector<ResultRow> rows;
  std::size_t i = 0;
  for (std::size_t a = 0; a < config.alpha_grid.size(); ++a)
    for (std::size_t g = 0; g < config.gamma_grid.size(); ++g) {
      const ResultRow* sd = wants(config, SolverKind::CFSD) ? &results[i++] : nullptr;
      const std::size_t first_cg = i;
      if (wants(config, SolverKind::CFCG)) i += config.beta_kinds.size();
      for (std::size_t b = 0; b < config.beta_kinds.size(); ++b) {
        if (wants(config, SolverKind::CFCG)) rows.push_back(results[first_cg + b]);
        if (sd) {
          ResultRow partner = *sd;
          partner.beta = config.beta_kinds[b];
          rows.push_back(std::move(partner));
        }
      }
    }
  return rows;
}

std::vector<ResultRow> run_example2(const ExperimentConfig& config) {
  config.validate();
  prepare_output(config);
  const MlpSpec spec = config.mlp_spec();
  spec.validate();
  const Vec terminal = mlp_lower_terminal(spec);

  struct Cell {
    double alpha;
    BenchmarkFn fn;
    SolverKind solver;
    BetaKind beta;
    int trial;
  };
  std::vector<Cell> cells;
  for (double alpha : config.alpha_grid)
    for (BenchmarkFn fn : config.functions) {
      for (int t = 0; t < config.trials; ++t) {
        if (wants(config, SolverKind::CFSD))
          cells.push_back({alpha, fn, SolverKind::CFSD, BetaKind::FR, t});
        if (wants(config, SolverKind::CFCG))
          for (BetaKind beta : config.beta_kinds)
            cells.push_back({alpha, fn, SolverKind::CFCG, beta, t});
      }
    }

  std::vector<CellOutcome> outcomes(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(cell.trial));
    Objective f = mlp_objective(spec, cell.fn, trial_seed);
    const Vec x0 = mlp_initial_point(spec, trial_seed);
    const SolverOptions opt = solver_options(config, cell.alpha, terminal);
    outcomes[i] = run_cell(f, x0, cell.solver, cell.beta, GridStep{config.cfsd_grid},
                           config.line_search, opt);
    ResultRow key;
    key.experiment = "example2";
    key.problem = std::string(to_string(cell.fn));
    key.solver = cell.solver;
    key.beta = cell.beta;
    key.alpha = cell.alpha;
    save_trace(config, trace_name(key, cell.trial), outcomes[i]);
    outcomes[i].report.trace.clear();
    outcomes[i].report.final_x.resize(0);
  });

  auto aggregate = [&](double alpha, BenchmarkFn fn, SolverKind solver, BetaKind beta) {
    ResultRow row;
    row.experiment = "example2";
    row.problem = std::string(to_string(fn));
    row.solver = solver;
    row.beta = beta;
    row.alpha = alpha;
    row.rho = config.rho;
    row.seed = config.seed;
    row.trials = config.trials;
    int completed = 0;
    std::string worst;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Cell& c = cells[i];
      if (c.alpha != alpha || c.fn != fn || c.solver != solver ||
          (solver == SolverKind::CFCG && c.beta != beta))
        continue;
      const CellOutcome& out = outcomes[i];
      row.wall_ms += out.wall_ms;
      if (out.status == "Converged")
        ++row.converged;
      else if (worst.empty())
        worst = out.status;
      if (!out.ok) continue;
      ++completed;
      row.iterations += out.report.iterations;
      row.objective_evals += static_cast<double>(out.report.objective_evals);
      row.gradient_evals += static_cast<double>(out.report.gradient_evals);
      row.final_grad_norm += out.report.final_grad_norm;
    }
    if (completed > 0) {
      row.iterations /= completed;
      row.objective_evals /= completed;
      row.gradient_evals /= completed;
      row.final_grad_norm /= completed;
    }
    row.status = worst.empty() ? "Converged" : worst;
    row.note = std::to_string(row.converged) + "/" + std::to_string(row.trials) +
               " trials converged; means over " + std::to_string(completed) + " completed";
    return row;
  };

  std::vector<ResultRow> rows;
  for (double alpha : config.alpha_grid)
    for (BenchmarkFn fn : config.functions)
      for (BetaKind beta : config.beta_kinds) {
        if (wants(config, SolverKind::CFCG))
          rows.push_back(aggregate(alpha, fn, SolverKind::CFCG, beta));
        if (wants(config, SolverKind::CFSD)) {
          ResultRow sd = aggregate(alpha, fn, SolverKind::CFSD, BetaKind::FR);
          sd.beta = beta;
          rows.push_back(std::move(sd));
        }
      }
  return rows;
}

SingleResult run_single(const ExperimentConfig& config) {
  config.validate();
  if (config.solvers.size() != 1) throw ConfigError("single runs need exactly one solver", "solvers");
  if (config.beta_kinds.size() != 1) throw ConfigError("single runs need exactly one beta", "beta");
  if (config.alpha_grid.size() != 1) throw ConfigError("single runs need exactly one alpha", "alpha");
  prepare_output(config);

  const SolverKind solver = config.solvers.front();
  const BetaKind beta = config.beta_kinds.front();
  const double alpha = config.alpha_grid.front();

  ResultRow row;
  row.experiment = "single";
  row.problem = std::string(to_string(config.problem));
  row.solver = solver;
  row.beta = beta;
  row.alpha = alpha;
  row.rho = config.rho;
  row.seed = config.seed;

  CellOutcome out;
  if (config.problem == ProblemKind::Tikhonov) {
    if (config.gamma_grid.size() != 1)
      throw ConfigError("single runs need exactly one gamma", "gamma");
    Example1Config gen;
    gen.seed = config.seed;
    gen.m = config.m;
    gen.n = config.n;
    const Example1Instance inst = gen_example1(gen);
    LeastSquaresProblem prob = inst.problem;
    prob.gamma = config.gamma_grid.front();
    row.gamma = prob.gamma;
    Objective f = tikhonov_objective(prob);
    SolverOptions opt = solver_options(config, alpha, inst.c);
    opt.reference = tikhonov_solution(prob);
    out = run_cell(f, inst.x0, solver, beta, FixedStep{config.cfsd_step}, config.line_search,
                   opt);
  } else {
    if (config.functions.size() != 1)
      throw ConfigError("single runs need exactly one function", "functions");
    const MlpSpec spec = config.mlp_spec();
    spec.validate();
    row.problem = std::string(to_string(config.functions.front()));
    const std::uint64_t trial_seed = derive_seed(config.seed, 0);
    Objective f = mlp_objective(spec, config.functions.front(), trial_seed);
    const SolverOptions opt = solver_options(config, alpha, mlp_lower_terminal(spec));
    out = run_cell(f, mlp_initial_point(spec, trial_seed), solver, beta,
                   GridStep{config.cfsd_grid}, config.line_search, opt);
  }
  fill_from(row, out);
  save_trace(config, trace_name(row), out);
  return {std::move(row), std::move(out.report)};
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::Example1: return run_example1(config);
    case ExperimentKind::Example2: return run_example2(config);
    case ExperimentKind::Single: return {run_single(config).row};
  }
  throw ConfigError("unknown experiment", "experiment");
}

int exit_code(const std::vector<ResultRow>& rows) {
  for (const auto& row : rows)
    if (row.status != "Converged") return 1;
  return 0;
}

namespace {

// Row values as text, in kResultColumns order; empty string for absent optionals.
std::vector<std::string> row_fields(const ResultRow& row) {
  return {row.experiment,
          row.problem,
          std::string(to_string(row.solver)),
          std::string(to_string(row.beta)),
          format_shortest(row.alpha),
          format_shortest(row.rho),
          row.gamma ? format_shortest(*row.gamma) : "",
          std::to_string(row.seed),
          row.status,
          format_shortest(row.iterations),
          format_shortest(row.objective_evals),
          format_shortest(row.gradient_evals),
          format_shortest(row.final_grad_norm),
          row.final_distance ? format_shortest(*row.final_distance) : "",
          std::to_string(row.trials),
          std::to_string(row.converged),
          row.note,
          "traces/" + trace_name(row),
          format_shortest(row.wall_ms)};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool include_timing) {
  const std::size_t width = kResultColumns.size() - (include_timing ? 0 : 1);
  for (std::size_t i = 0; i < width; ++i) out << (i ? "," : "") << kResultColumns[i];
  out << '\n';
  for (const auto& row : rows) {
    const auto fields = row_fields(row);
    for (std::size_t i = 0; i < width; ++i) out << (i ? "," : "") << csv_escape(fields[i]);
    out << '\n';
  }
}

void write_results_json(std::ostream& out, const std::vector<ResultRow>& rows,
                        bool include_timing) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["experiment"] = row.experiment;
    j["problem"] = row.problem;
    j["solver"] = to_string(row.solver);
    j["beta"] = to_string(row.beta);
    j["alpha"] = row.alpha;
    j["rho"] = row.rho;
    j["gamma"] = row.gamma ? nlohmann::ordered_json(*row.gamma) : nlohmann::ordered_json();
    j["seed"] = row.seed;
    j["status"] = row.status;
    j["iterations"] = row.iterations;
    j["objective_evals"] = row.objective_evals;
    j["gradient_evals"] = row.gradient_evals;
    j["final_grad_norm"] = row.final_grad_norm;
    j["final_distance"] =
        row.final_distance ? nlohmann::ordered_json(*row.final_distance) : nlohmann::ordered_json();
    j["trials"] = row.trials;
    j["converged"] = row.converged;
    j["note"] = row.note;
    j["trace"] = "traces/" + trace_name(row);
    if (include_timing) j["wall_ms"] = row.wall_ms;
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

std::filesystem::path write_results(const ExperimentConfig& config,
                                    const std::vector<ResultRow>& rows) {
  std::filesystem::create_directories(config.out);
  const auto path =
      config.out / (config.format == OutputFormat::Csv ? "results.csv" : "results.json");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  if (config.format == OutputFormat::Csv)
    write_results_csv(out, rows);
  else
    write_results_json(out, rows);
  if (!out) throw Error("write to " + path.string() + " failed");
  return path;
}

}  // namespace cfcg
