#include "cfcg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cfcg/errors.hpp"
#include "cfcg/trace_io.hpp"

namespace cfcg {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

struct Parser {
  std::string key;
  int line;

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(message, key, line); }

  double real(const std::string& text) const {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
      fail("expected a number, got '" + text + "'");
    return v;
  }

  template <class Int>
  Int integer(const std::string& text) const {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
      fail("expected an integer, got '" + text + "'");
    return v;
  }

  bool boolean(const std::string& text) const {
    const auto t = lower(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    fail("expected true or false, got '" + text + "'");
  }

  std::vector<double> reals(std::string_view text) const {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(real(item));
    if (out.empty()) fail("list must not be empty");
    return out;
  }

  template <class T, class Fn>
  std::vector<T> names(std::string_view text, Fn parse_one) const {
    std::vector<T> out;
    for (const auto& item : split_list(text)) {
      try {
        out.push_back(parse_one(item));
      } catch (const DomainError& e) {
        fail(e.what());
      }
    }
    if (out.empty()) fail("list must not be empty");
    return out;
  }

  template <class E, std::size_t N>
  E choice(const std::string& text, const std::array<E, N>& options) const {
    const auto t = lower(text);
    std::string allowed;
    for (E e : options) {
      if (t == lower(to_string(e))) return e;
      allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
    }
    fail("expected one of " + allowed + ", got '" + text + "'");
  }
};

constexpr std::array kExperiments = {ExperimentKind::Example1, ExperimentKind::Example2,
                                     ExperimentKind::Single};
constexpr std::array kFormats = {OutputFormat::Csv, OutputFormat::Json};
constexpr std::array kSolvers = {SolverKind::CFCG, SolverKind::CFSD};
constexpr std::array kStopRules = {StopRule::Gradient, StopRule::Loss};
constexpr std::array kProblems = {ProblemKind::Tikhonov, ProblemKind::Mlp};

template <class T, class Fn>
std::string join(const std::vector<T>& items, Fn fmt) {
  std::string out;
  for (const auto& item : items) out += (out.empty() ? "" : ",") + std::string(fmt(item));
  return out;
}

std::string reals_text(const std::vector<double>& v) { return join(v, format_shortest); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Example1: return "example1";
    case ExperimentKind::Example2: return "example2";
    case ExperimentKind::Single: return "single";
  }
  return "?";
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

std::string_view to_string(SolverKind kind) { return kind == SolverKind::CFCG ? "CFCG" : "CFSD"; }

std::string_view to_string(StopRule rule) {
  return rule == StopRule::Gradient ? "gradient" : "loss";
}

std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::Tikhonov ? "tikhonov" : "mlp";
}

StopCriteria ExperimentConfig::stop_criteria() const {
  StopCriteria s;
  s.grad_tol = tol;
  s.max_iter = max_iter;
  s.f_tol = stop_rule == StopRule::Loss ? tol : 0.0;
  return s;
}

MlpSpec ExperimentConfig::mlp_spec() const {
  MlpSpec spec;
  spec.hidden_units = hidden;
  spec.train_points = points;
  spec.trials = trials;
  spec.alpha_grid = alpha_grid;
  return spec;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg, const char* field) { throw ConfigError(msg, field); };
  if (beta_kinds.empty()) fail("at least one beta kind is required", "beta");
  if (alpha_grid.empty()) fail("at least one alpha is required", "alpha");
  for (double a : alpha_grid)
    if (!(a > 0.0 && a < 1.0)) fail("alpha must lie in (0,1)", "alpha");
  if (!std::isfinite(rho)) fail("rho must be finite", "rho");
  if (gamma_grid.empty()) fail("at least one gamma is required", "gamma");
  for (double g : gamma_grid)
    if (!(g >= 0.0)) fail("gamma must be >= 0", "gamma");
  if (solvers.empty()) fail("at least one solver is required", "solvers");
  if (!(tol > 0.0)) fail("tol must be > 0", "tol");
  if (max_iter < 0) fail("max_iter must be >= 0", "max_iter");
  try {
    line_search.validate();
  } catch (const DomainError& e) {
    fail(e.what(), "c1");
  }
  if (!(min_cos >= 0.0 && min_cos < 1.0)) fail("min_cos must lie in [0,1)", "min_cos");
  if (node_count < 2) fail("nodes must be >= 2", "nodes");
  if (!(cfsd_step > 0.0)) fail("cfsd_step must be > 0", "cfsd_step");
  if (cfsd_grid.empty()) fail("cfsd_grid must not be empty", "cfsd_grid");
  for (double e : cfsd_grid)
    if (!(e > 0.0)) fail("cfsd_grid entries must be > 0", "cfsd_grid");
  if (m < 1) fail("m must be >= 1", "m");
  if (n < 1) fail("n must be >= 1", "n");
  if (hidden < 1) fail("hidden must be >= 1", "hidden");
  if (points < 1) fail("points must be >= 1", "points");
  if (trials < 1) fail("trials must be >= 1", "trials");
  if (functions.empty()) fail("at least one function is required", "functions");
  if (threads < 1) fail("threads must be >= 1", "threads");
  if (out.empty()) fail("output path must not be empty", "out");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  if (kind == ExperimentKind::Example2) {
    c.alpha_grid = {0.5, 0.6, 0.7, 0.8, 0.9};
    c.stop_rule = StopRule::Loss;
    c.node_count = 256;
  }
  return c;
}

void set_config_value(ExperimentConfig& c, std::string_view key_view, std::string_view value_view,
                      int line) {
  const std::string key = lower(trim(key_view));
  const std::string value = trim(value_view);
  const Parser p{key, line};

  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters = {
      {"experiment", [&] { c.experiment = p.choice(value, kExperiments); }},
      {"seed", [&] { c.seed = p.integer<std::uint64_t>(value); }},
      {"beta", [&] { c.beta_kinds = p.names<BetaKind>(value, parse_beta_kind); }},
      {"alpha", [&] { c.alpha_grid = p.reals(value); }},
      {"rho", [&] { c.rho = p.real(value); }},
      {"gamma", [&] { c.gamma_grid = p.reals(value); }},
      {"solvers",
       [&] {
         c.solvers = p.names<SolverKind>(value, [&](const std::string& s) {
           return p.choice(s, kSolvers);
         });
       }},
      {"stop_rule", [&] { c.stop_rule = p.choice(value, kStopRules); }},
      {"tol", [&] { c.tol = p.real(value); }},
      {"max_iter", [&] { c.max_iter = p.integer<int>(value); }},
      {"c1", [&] { c.line_search.c1 = p.real(value); }},
      {"c2", [&] { c.line_search.c2 = p.real(value); }},
      {"backtrack", [&] { c.line_search.r = p.real(value); }},
      {"max_trials", [&] { c.line_search.max_trials = p.integer<int>(value); }},
      {"min_cos", [&] { c.min_cos = p.real(value); }},
      {"nodes", [&] { c.node_count = p.integer<int>(value); }},
      {"cfsd_step", [&] { c.cfsd_step = p.real(value); }},
      {"cfsd_grid", [&] { c.cfsd_grid = p.reals(value); }},
      {"m", [&] { c.m = p.integer<int>(value); }},
      {"n", [&] { c.n = p.integer<int>(value); }},
      {"hidden", [&] { c.hidden = p.integer<int>(value); }},
      {"points", [&] { c.points = p.integer<int>(value); }},
      {"trials", [&] { c.trials = p.integer<int>(value); }},
      {"functions", [&] { c.functions = p.names<BenchmarkFn>(value, parse_benchmark_fn); }},
      {"problem", [&] { c.problem = p.choice(value, kProblems); }},
      {"out",
       [&] {
         if (value.empty()) p.fail("output path must not be empty");
         c.out = value;
       }},
      {"format", [&] { c.format = p.choice(value, kFormats); }},
      {"traces", [&] { c.traces = p.boolean(value); }},
      {"threads", [&] { c.threads = p.integer<int>(value); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown key", key, line);
  it->second();
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", body, line);
    const std::string key = lower(trim(std::string_view(body).substr(0, eq)));
    if (key.empty()) throw ConfigError("missing key before '='", key, line);
    if (!seen.insert(key).second) throw ConfigError("duplicate key", key, line);
    set_config_value(c, key, std::string_view(body).substr(eq + 1), line);
  }
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), "config");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  auto put = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  put("experiment", std::string(to_string(c.experiment)));
  put("seed", std::to_string(c.seed));
  put("beta", join(c.beta_kinds, [](BetaKind k) { return to_string(k); }));
  put("alpha", reals_text(c.alpha_grid));
  put("rho", format_shortest(c.rho));
  put("gamma", reals_text(c.gamma_grid));
  put("solvers", join(c.solvers, [](SolverKind k) { return to_string(k); }));
  put("stop_rule", std::string(to_string(c.stop_rule)));
  put("tol", format_shortest(c.tol));
  put("max_iter", std::to_string(c.max_iter));
  put("c1", format_shortest(c.line_search.c1));
  put("c2", format_shortest(c.line_search.c2));
  put("backtrack", format_shortest(c.line_search.r));
  put("max_trials", std::to_string(c.line_search.max_trials));
  put("min_cos", format_shortest(c.min_cos));
  put("nodes", std::to_string(c.node_count));
  put("cfsd_step", format_shortest(c.cfsd_step));
  put("cfsd_grid", reals_text(c.cfsd_grid));
  put("m", std::to_string(c.m));
  put("n", std::to_string(c.n));
  put("hidden", std::to_string(c.hidden));
  put("points", std::to_string(c.points));
  put("trials", std::to_string(c.trials));
  put("functions", join(c.functions, [](BenchmarkFn f) { return to_string(f); }));
  put("problem", std::string(to_string(c.problem)));
  put("out", c.out.string());
  put("format", std::string(to_string(c.format)));
  put("traces", c.traces ? "true" : "false");
  put("threads", std::to_string(c.threads));
  return out.str();
}

}  // namespace cfcg
