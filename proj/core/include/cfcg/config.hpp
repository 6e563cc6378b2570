#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfcg/cg_engine.hpp"
#include "cfcg/problems.hpp"

namespace cfcg {

enum class ExperimentKind { Example1, Example2, Single };
enum class OutputFormat { Csv, Json };
enum class SolverKind { CFCG, CFSD };
/// gradient: stop when |g| < tol. loss: also stop once an accepted step changes f by < tol.
enum class StopRule { Gradient, Loss };
/// Problem family used by the single-run mode.
enum class ProblemKind { Tikhonov, Mlp };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(OutputFormat format);
std::string_view to_string(SolverKind kind);
std::string_view to_string(StopRule rule);
std::string_view to_string(ProblemKind kind);

/// Everything a sweep needs. Serialized as flat "key = value" text, one key per line;
/// lists are comma separated, '#' starts a comment.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Example1;
  std::uint64_t seed = 1;
  std::vector<BetaKind> beta_kinds{kAllBetaKinds.begin(), kAllBetaKinds.end()};
  std::vector<double> alpha_grid{0.9};
  double rho = 0.1;
  std::vector<double> gamma_grid{0.5, 0.75, 1.0, 2.0, 3.0, 4.0};
  std::vector<SolverKind> solvers{SolverKind::CFCG, SolverKind::CFSD};

  StopRule stop_rule = StopRule::Gradient;
  double tol = 1e-4;
  int max_iter = 2000;
  LineSearchParams line_search;
  double min_cos = 0.05;
  int node_count = 2000;

  double cfsd_step = 1e-3;  // fixed step (Example 1, single Tikhonov runs)
  std::vector<double> cfsd_grid{0.01, 0.005, 0.001, 0.0005, 0.0001, 0.00005, 0.00001};

  int m = 100;  // Example 1: X is n x m
  int n = 100;

  int hidden = 60;  // Example 2
  int points = 100;
  int trials = 5;
  std::vector<BenchmarkFn> functions{BenchmarkFn::H1, BenchmarkFn::H2, BenchmarkFn::H3};

  ProblemKind problem = ProblemKind::Tikhonov;  // single

  std::filesystem::path out = "results";
  OutputFormat format = OutputFormat::Csv;
  bool traces = true;
  int threads = 1;

  StopCriteria stop_criteria() const;
  MlpSpec mlp_spec() const;
  /// Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Protocol defaults for each experiment: Example 2 switches to the alpha grid
/// {0.5, ..., 0.9}, the loss stopping rule and a 256-node quadrature.
ExperimentConfig default_config(ExperimentKind kind);

/// Applies "key = value" lines from text on top of base. Unknown keys, malformed values and
/// duplicate keys raise ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base);
ExperimentConfig load_config_file(const std::filesystem::path& path, const ExperimentConfig& base);

/// Sets one key from its text form (used for file lines and command-line overrides).
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value,
                      int line = 0);

/// Every key, in a fixed order; parse_config(to_config_text(c), anything) == c.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace cfcg
