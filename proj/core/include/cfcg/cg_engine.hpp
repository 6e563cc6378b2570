#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfcg/objective.hpp"

namespace cfcg {

enum class BetaKind { FR, CD, DY, PRP, HS };

inline constexpr std::array<BetaKind, 5> kAllBetaKinds = {BetaKind::FR, BetaKind::CD, BetaKind::DY,
                                                          BetaKind::PRP, BetaKind::HS};

std::string_view to_string(BetaKind kind);
/// Case-insensitive; throws DomainError on an unknown name.
BetaKind parse_beta_kind(std::string_view name);

struct LineSearchParams {
  double c1 = 1e-4;
  double c2 = 0.9;
  double r = 0.5;  // backtracking ratio
  int max_trials = 60;

  /// Throws DomainError unless 0 < c1 < c2 < 1, 0 < r < 1 and max_trials >= 1.
  void validate() const;
  bool operator==(const LineSearchParams&) const = default;
};

/// A run converges when |g| < grad_tol, or, with f_tol > 0, when an accepted step changed
/// f by less than f_tol.
struct StopCriteria {
  double grad_tol = 1e-4;
  int max_iter = 2000;
  double f_tol = 0.0;

  void validate() const;
  bool operator==(const StopCriteria&) const = default;
};

enum class RunStatus { Converged, MaxIter, LineSearchFailure };
std::string_view to_string(RunStatus status);

/// One row of a convergence trace. Row k describes the state at x^k and the step taken
/// from it. The last row of every trace is the terminal state (terminal == true, step 0).
struct IterRecord {
  int k = 0;
  double f_value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double beta = 0.0;
  double descent_inner = 0.0;  // g^k . d^k
  double next_inner = 0.0;     // g^{k+1} . d^k, the Wolfe left-hand side
  double cos_theta = 0.0;      // -g.d / (|g| |d|)
  bool restarted = false;
  bool terminal = false;
  std::optional<double> dist_to_reference;
  // Populated only when SolverOptions::keep_iterates is set.
  Vec x;
  Vec d;
};

struct RunReport {
  RunStatus status = RunStatus::MaxIter;
  int iterations = 0;
  std::int64_t objective_evals = 0;
  std::int64_t gradient_evals = 0;
  Vec final_x;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  std::vector<IterRecord> trace;
  std::string note;  // free-form annotation, e.g. the divergence guard firing
};

struct SolverOptions {
  FracParams frac;
  QuadratureSpec quadrature;
  StopCriteria stop;
  /// When set, every trace row records |x^k - reference|.
  std::optional<Vec> reference;
  bool keep_iterates = false;
  /// CG directions with cos(theta) = -g.d / (|g| |d|) below this restart from -g.
  /// Zero disables the test.
  double min_cos = 0.0;
};

/// Relative size below which a beta denominator counts as vanished.
inline constexpr double kDenominatorFloor = 1e-12;
/// Directions must satisfy g.d <= -kSufficientDescent |g|^2, else the engine restarts.
inline constexpr double kSufficientDescent = 1e-8;

/// Conjugate-gradient coefficient. PRP and HS are clamped at zero. Throws
/// DenominatorUnderflow when the denominator u.v has |u.v| <= kDenominatorFloor |u| |v|.
double beta_value(BetaKind kind, const Vec& g, const Vec& g_prev, const Vec& d_prev);

struct Direction {
  Vec d;
  bool restarted = false;
};

/// d = -g (first iteration) or -g + beta d_prev; falls back to -g if that is not a
/// sufficient descent direction.
Direction direction(const Vec& g, double beta, const Vec* d_prev);

struct StepResult {
  double eta = 0.0;
  int trials = 0;
  double f_new = 0.0;
  Vec g_new;
};

using GradientFn = std::function<Vec(const Vec&)>;

using MeritFn = std::function<double(const Vec&)>;

/// First eta in {1, r, r^2, ...} satisfying
///   f(x + eta d) <= f(x) + c1 eta g.d   and   grad(x + eta d).d >= c2 g.d.
/// f is the counted merit function, fx its value at x.
/// The gradient is only requested at points that already pass the Armijo test.
/// Throws PreconditionViolation if g.d >= 0, LineSearchFailure after max_trials candidates.
StepResult armijo_wolfe_search(const MeritFn& f, const GradientFn& grad, const Vec& x, double fx,
                               const Vec& d, const Vec& g, const LineSearchParams& params);

/// Caputo fractional conjugate gradient.
RunReport cfcg_minimize(Objective& f, const Vec& x0, BetaKind kind, const LineSearchParams& ls,
                        const SolverOptions& options);

struct FixedStep {
  double eta = 1e-3;
};
struct GridStep {
  std::vector<double> etas;
};
using StepRule = std::variant<FixedStep, GridStep>;

/// Number of consecutive objective increases after which fixed-step descent gives up.
inline constexpr int kDivergenceWindow = 50;

/// Caputo fractional steepest descent x^{k+1} = x^k - eta g^k.
RunReport cfsd_minimize(Objective& f, const Vec& x0, const StepRule& rule,
                        const SolverOptions& options);

}  // namespace cfcg
