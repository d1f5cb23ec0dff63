#ifndef MTM_TRACE_HPP
#define MTM_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtm {

enum class RunStatus { Completed, TargetReached, SubproblemFailure, Diverged };

std::string to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);

/// One row per iteration.  The first ten fields form the canonical CSV
/// schema; the rest are in-memory diagnostics.
struct TraceRecord {
  int k = 0;
  double f_x = 0.0;
  double f_y = 0.0;
  double alpha = 0.0;
  double A = 0.0;
  double L_k = 0.0;
  long long m_k = 0;
  long long calls_f = 0;  // cumulative function(-set) evaluations
  long long calls_g = 0;  // cumulative gradient(-set) evaluations
  double V_to_opt = std::numeric_limits<double>::quiet_NaN();

  // diagnostics outside the canonical schema
  int retries = 0;        // inner backtracking cycles j_k of this step
  double slack = 0.0;     // inexact/stochastic exit-condition slack used
  long long draws = 0;    // cumulative stochastic gradient draws
};

struct Trace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::Completed;

  // metadata needed by bound verification
  std::string solver_id;
  std::string problem_id;
  std::string prox_id;
  double L = 0.0;                     // certified Lipschitz constant
  std::optional<double> f_star;
  std::optional<double> R2;           // V(x_star, x0) when x_star is known
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;  // echo of scalar run parameters

  const TraceRecord& back() const { return records.back(); }
  double final_gap() const;  // f_x(last) - f_star; NaN when f_star unknown

  /// Header line (JSON) + canonical CSV, scalars as shortest round-trip
  /// decimals, with an FNV-1a content hash of the CSV payload in the header.
  std::string serialize() const;
  static Trace deserialize(const std::string& text);

  void save(const std::string& path) const;
  static Trace load(const std::string& path);
};

/// Shortest round-trip decimal form of a double ("nan" for quiet NaN).
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace mtm

#endif  // MTM_TRACE_HPP
