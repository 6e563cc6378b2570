#include "cfcg/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cfcg/errors.hpp"

namespace cfcg {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, int line) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw Error("trace line " + std::to_string(line) + ": bad number '" + text + "'");
  return v;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_shortest(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const std::vector<IterRecord>& trace) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i)
    out << (i ? "," : "") << kTraceColumns[i];
  out << '\n';
  for (const auto& r : trace) {
    out << r.k << ',' << format_real(r.f_value) << ',' << format_real(r.grad_norm) << ','
        << format_real(r.step) << ',' << format_real(r.beta) << ','
        << format_real(r.descent_inner) << ',' << format_real(r.next_inner) << ','
        << format_real(r.cos_theta) << ',' << (r.restarted ? 1 : 0) << ',';
    if (r.dist_to_reference) out << format_real(*r.dist_to_reference);
    out << '\n';
  }
}

void write_trace_file(const std::filesystem::path& path, const std::vector<IterRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::vector<IterRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("trace is empty");
  const auto header = split(line, ',');
  if (header.size() != kTraceColumns.size())
    throw Error("trace header has " + std::to_string(header.size()) + " columns");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != kTraceColumns[i])
      throw Error("trace header column " + std::to_string(i) + " is '" + header[i] + "'");

  std::vector<IterRecord> trace;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kTraceColumns.size())
      throw Error("trace line " + std::to_string(line_no) + ": expected " +
                  std::to_string(kTraceColumns.size()) + " fields");
    IterRecord r;
    r.k = static_cast<int>(parse_real(f[0], line_no));
    r.f_value = parse_real(f[1], line_no);
    r.grad_norm = parse_real(f[2], line_no);
    r.step = parse_real(f[3], line_no);
    r.beta = parse_real(f[4], line_no);
    r.descent_inner = parse_real(f[5], line_no);
    r.next_inner = parse_real(f[6], line_no);
    r.cos_theta = parse_real(f[7], line_no);
    if (f[8] != "0" && f[8] != "1")
      throw Error("trace line " + std::to_string(line_no) + ": restarted must be 0 or 1");
    r.restarted = f[8] == "1";
    if (!f[9].empty()) r.dist_to_reference = parse_real(f[9], line_no);
    trace.push_back(std::move(r));
  }
  if (!trace.empty()) trace.back().terminal = true;
  return trace;
}

std::vector<IterRecord> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_trace_csv(in);
}

std::vector<TraceViolation> check_trace(const std::vector<IterRecord>& trace,
                                        const LineSearchParams& params, bool check_line_search,
                                        double tolerance) {
  std::vector<TraceViolation> out;
  auto check = [&](int k, const char* name, double slack) {
    if (slack < -tolerance) out.push_back({k, name, slack});
  };
  if (trace.empty() || !trace.back().terminal) {
    out.push_back({trace.empty() ? 0 : trace.back().k, "terminal", -1.0});
    return out;
  }
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const auto& r = trace[i];
    const auto& next = trace[i + 1];
    check(r.k, "descent", -kSufficientDescent * r.grad_norm * r.grad_norm - r.descent_inner);
    if (!check_line_search) continue;
    check(r.k, "armijo", r.f_value + params.c1 * r.step * r.descent_inner - next.f_value);
    check(r.k, "wolfe", r.next_inner - params.c2 * r.descent_inner);
    check(r.k, "monotone", r.f_value - next.f_value);
  }
  return out;
}

}  // namespace cfcg
