#include "cfcg/cg_engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "cfcg/errors.hpp"

namespace cfcg {
namespace {

double checked_ratio(double numerator, const Vec& u, const Vec& v, const char* which) {
  const double den = u.dot(v);
  if (std::abs(den) <= kDenominatorFloor * u.norm() * v.norm() || den == 0.0)
    throw DenominatorUnderflow(std::string(which) + ": denominator vanished");
  return numerator / den;
}

void check_start(const Objective& f, const Vec& x0, const SolverOptions& options) {
  if (x0.size() != f.dimension())
    throw DimensionMismatch("x0 has dimension " + std::to_string(x0.size()) + ", objective has " +
                            std::to_string(f.dimension()));
  if (!x0.allFinite()) throw PreconditionViolation("x0 must be finite");
  options.frac.validate(x0.size());
  options.quadrature.validate();
  options.stop.validate();
  if (options.reference && options.reference->size() != x0.size())
    throw DimensionMismatch("reference point dimension differs from x0");
}

IterRecord make_record(int k, double fx, double grad_norm, const Vec& x,
                       const SolverOptions& options) {
  IterRecord rec;
  rec.k = k;
  rec.f_value = fx;
  rec.grad_norm = grad_norm;
  if (options.reference) rec.dist_to_reference = (x - *options.reference).norm();
  if (options.keep_iterates) rec.x = x;
  return rec;
}

void finish(RunReport& report, const Objective& f, const Vec& x, double fx, double grad_norm,
            int k, const SolverOptions& options) {
  IterRecord last = make_record(k, fx, grad_norm, x, options);
  last.terminal = true;
  report.trace.push_back(std::move(last));
  report.iterations = k;
  report.final_x = x;
  report.final_f = fx;
  report.final_grad_norm = grad_norm;
  report.objective_evals = f.objective_evals();
  report.gradient_evals = f.gradient_evals();
}

}  // namespace

std::string_view to_string(BetaKind kind) {
  switch (kind) {
    case BetaKind::FR: return "FR";
    case BetaKind::CD: return "CD";
    case BetaKind::DY: return "DY";
    case BetaKind::PRP: return "PRP";
    case BetaKind::HS: return "HS";
  }
  return "?";
}

BetaKind parse_beta_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  for (BetaKind kind : kAllBetaKinds)
    if (upper == to_string(kind)) return kind;
  throw DomainError("unknown beta kind '" + std::string(name) + "' (expected FR, CD, DY, PRP, HS)");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::LineSearchFailure: return "LineSearchFailure";
  }
  return "?";
}

void LineSearchParams::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0))
    throw DomainError("line search needs 0 < c1 < c2 < 1");
  if (!(0.0 < r && r < 1.0)) throw DomainError("backtracking ratio r must lie in (0,1)");
  if (max_trials < 1) throw DomainError("max_trials must be >= 1");
}

void StopCriteria::validate() const {
  if (!(grad_tol > 0.0)) throw DomainError("grad_tol must be > 0");
  if (max_iter < 0) throw DomainError("max_iter must be >= 0");
  if (!(f_tol >= 0.0)) throw DomainError("f_tol must be >= 0");
}

double beta_value(BetaKind kind, const Vec& g, const Vec& g_prev, const Vec& d_prev) {
  if (g.size() != g_prev.size() || g.size() != d_prev.size())
    throw DimensionMismatch("beta_value: vector dimensions differ");
  const double gg = g.squaredNorm();
  switch (kind) {
    case BetaKind::FR:
      return checked_ratio(gg, g_prev, g_prev, "FR");
    case BetaKind::CD:
      return -checked_ratio(gg, d_prev, g_prev, "CD");
    case BetaKind::DY:
      return checked_ratio(gg, d_prev, g - g_prev, "DY");
    case BetaKind::PRP:
      return std::max(0.0, checked_ratio(g.dot(g - g_prev), g_prev, g_prev, "PRP"));
    case BetaKind::HS: {
      const Vec y = g - g_prev;
      return std::max(0.0, checked_ratio(g.dot(y), d_prev, y, "HS"));
    }
  }
  throw DomainError("beta_value: unknown kind");
}

Direction direction(const Vec& g, double beta, const Vec* d_prev) {
  if (d_prev == nullptr) return {-g, false};
  Vec d = -g + beta * *d_prev;
  if (g.dot(d) <= -kSufficientDescent * g.squaredNorm() && d.allFinite()) return {std::move(d), false};
  return {-g, true};
}

StepResult armijo_wolfe_search(const MeritFn& f, const GradientFn& grad, const Vec& x, double fx,
                               const Vec& d, const Vec& g, const LineSearchParams& params) {
  params.validate();
  const double slope = g.dot(d);
  if (!(slope < 0.0))
    throw PreconditionViolation("armijo_wolfe_search: d is not a descent direction (g.d = " +
                                std::to_string(slope) + ")");

  double eta = 1.0;
  for (int trial = 1; trial <= params.max_trials; ++trial, eta *= params.r) {
    const Vec trial_x = x + eta * d;
    const double f_trial = f(trial_x);
    if (!(f_trial <= fx + params.c1 * eta * slope)) continue;
    Vec g_trial = grad(trial_x);
    if (g_trial.dot(d) >= params.c2 * slope) return {eta, trial, f_trial, std::move(g_trial)};
  }
  throw LineSearchFailure("no step in {1, r, ..., r^" + std::to_string(params.max_trials - 1) +
                              "} satisfies the Armijo-Wolfe conditions",
                          params.max_trials);
}

RunReport cfcg_minimize(Objective& f, const Vec& x0, BetaKind kind, const LineSearchParams& ls,
                        const SolverOptions& options) {
  check_start(f, x0, options);
  ls.validate();
  f.reset_counters();

  const GradientFn grad = [&](const Vec& p) {
    return f.fractional_gradient(p, options.frac, options.quadrature);
  };
  const MeritFn merit = [&](const Vec& p) { return f.merit(p, options.frac); };

  RunReport report;
  Vec x = x0;
  double fx = merit(x);
  Vec g = grad(x);
  Vec g_prev;
  Vec d_prev;
  double change = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    const double grad_norm = g.norm();
    if (grad_norm < options.stop.grad_tol || (k > 0 && change < options.stop.f_tol)) {
      report.status = RunStatus::Converged;
      finish(report, f, x, fx, grad_norm, k, options);
      return report;
    }
    if (k >= options.stop.max_iter) {
      report.status = RunStatus::MaxIter;
      finish(report, f, x, fx, grad_norm, k, options);
      return report;
    }

    double beta = 0.0;
    bool restarted = false;
    if (k > 0) {
      try {
        beta = beta_value(kind, g, g_prev, d_prev);
      } catch (const DenominatorUnderflow&) {
        restarted = true;
      }
    }
    Direction dir = direction(g, beta, k > 0 && !restarted ? &d_prev : nullptr);
    if (!dir.restarted && options.min_cos > 0.0 &&
        -g.dot(dir.d) < options.min_cos * grad_norm * dir.d.norm())
      dir = {-g, true};
    if (dir.restarted || restarted) {
      restarted = true;
      beta = 0.0;
    }
    const Vec& d = dir.d;

    StepResult step;
    try {
      step = armijo_wolfe_search(merit, grad, x, fx, d, g, ls);
    } catch (const LineSearchFailure& e) {
      report.status = RunStatus::LineSearchFailure;
      report.note = e.what();
      finish(report, f, x, fx, grad_norm, k, options);
      return report;
    }

    IterRecord rec = make_record(k, fx, grad_norm, x, options);
    rec.step = step.eta;
    rec.beta = beta;
    rec.descent_inner = g.dot(d);
    rec.next_inner = step.g_new.dot(d);
    rec.cos_theta = -rec.descent_inner / (grad_norm * d.norm());
    rec.restarted = restarted;
    if (options.keep_iterates) rec.d = d;
    report.trace.push_back(std::move(rec));

    x += step.eta * d;
    change = std::abs(fx - step.f_new);
    fx = step.f_new;
    g_prev = std::move(g);
    g = std::move(step.g_new);
    d_prev = std::move(dir.d);
  }
}

RunReport cfsd_minimize(Objective& f, const Vec& x0, const StepRule& rule,
                        const SolverOptions& options) {
  check_start(f, x0, options);
  if (const auto* fixed = std::get_if<FixedStep>(&rule); fixed && !(fixed->eta > 0.0))
    throw PreconditionViolation("fixed step must be > 0");
  if (const auto* grid = std::get_if<GridStep>(&rule)) {
    if (grid->etas.empty()) throw PreconditionViolation("step grid must be nonempty");
    for (double eta : grid->etas)
      if (!(eta > 0.0)) throw PreconditionViolation("grid steps must be > 0");
  }
  f.reset_counters();

  RunReport report;
  Vec x = x0;
  double fx = f.merit(x, options.frac);
  Vec g = f.fractional_gradient(x, options.frac, options.quadrature);
  int increases = 0;
  double change = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    const double grad_norm = g.norm();
    if (grad_norm < options.stop.grad_tol || (k > 0 && change < options.stop.f_tol)) {
      report.status = RunStatus::Converged;
      finish(report, f, x, fx, grad_norm, k, options);
      return report;
    }
    if (k >= options.stop.max_iter) {
      report.status = RunStatus::MaxIter;
      finish(report, f, x, fx, grad_norm, k, options);
      return report;
    }

    double eta = 0.0;
    double f_next = 0.0;
    Vec x_next;
    if (const auto* fixed = std::get_if<FixedStep>(&rule)) {
      eta = fixed->eta;
      x_next = x - eta * g;
      f_next = f.merit(x_next, options.frac);
    } else {
      f_next = std::numeric_limits<double>::infinity();
      for (double candidate : std::get<GridStep>(rule).etas) {
        Vec trial = x - candidate * g;
        const double f_trial = f.merit(trial, options.frac);
        if (f_trial < f_next || x_next.size() == 0) {
          f_next = f_trial;
          eta = candidate;
          x_next = std::move(trial);
        }
      }
    }

    IterRecord rec = make_record(k, fx, grad_norm, x, options);
    rec.step = eta;
    rec.descent_inner = -g.squaredNorm();
    rec.cos_theta = 1.0;
    if (options.keep_iterates) rec.d = -g;

    const bool fixed_mode = std::holds_alternative<FixedStep>(rule);
    increases = (fixed_mode && f_next > fx) ? increases + 1 : 0;

    x = std::move(x_next);
    change = std::abs(fx - f_next);
    fx = f_next;
    Vec g_next = f.fractional_gradient(x, options.frac, options.quadrature);
    rec.next_inner = -g_next.dot(g);
    report.trace.push_back(std::move(rec));
    g = std::move(g_next);

    if (increases >= kDivergenceWindow) {
      report.status = RunStatus::MaxIter;
      report.note = "diverged: objective increased for " + std::to_string(kDivergenceWindow) +
                    " consecutive iterations";
      finish(report, f, x, fx, g.norm(), k + 1, options);
      return report;
    }
  }
}

}  // namespace cfcg
