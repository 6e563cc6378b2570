#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cfcg/cg_engine.hpp"

namespace cfcg {

/// Trace CSV header, in column order. dist_to_ref is empty when no reference was set.
inline constexpr std::array<std::string_view, 10> kTraceColumns = {
    "k", "f", "grad_norm", "step", "beta", "descent_inner", "next_inner", "cos_theta",
    "restarted", "dist_to_ref"};

/// Trace number format: 17 significant digits.
std::string format_real(double value);
/// Shortest text that parses back to the same double (config and result files).
std::string format_shortest(double value);

void write_trace_csv(std::ostream& out, const std::vector<IterRecord>& trace);
void write_trace_file(const std::filesystem::path& path, const std::vector<IterRecord>& trace);

/// Parses a trace written by write_trace_csv. The last row is marked terminal.
/// Throws Error on a malformed header or row.
std::vector<IterRecord> read_trace_csv(std::istream& in);
std::vector<IterRecord> read_trace_file(const std::filesystem::path& path);

struct TraceViolation {
  int k = 0;
  std::string check;  // "armijo", "wolfe", "descent", "monotone", "terminal"
  double slack = 0.0;  // negative when violated
};

/// Replays the accepted-step conditions from recorded values alone:
///   armijo:   f[k+1] <= f[k] + c1 step[k] descent_inner[k]
///   wolfe:    next_inner[k] >= c2 descent_inner[k]
///   descent:  descent_inner[k] <= -kSufficientDescent grad_norm[k]^2
///   monotone: f[k+1] <= f[k]
/// A condition counts as violated when its slack is below -tolerance. CFSD traces have no
/// line search; pass check_line_search = false for them.
std::vector<TraceViolation> check_trace(const std::vector<IterRecord>& trace,
                                        const LineSearchParams& params,
                                        bool check_line_search = true, double tolerance = 1e-12);

}  // namespace cfcg
