#ifndef MTM_VERIFY_HPP
#define MTM_VERIFY_HPP

#include <string>
#include <vector>

#include "mtm/trace.hpp"

namespace mtm::bench {

enum class BoundKind { Base, Adaptive, Inexact, Stochastic, DirectionalMean };

BoundKind bound_for_solver(const std::string& solver_id);
std::string to_string(BoundKind kind);

struct BoundRow {
  std::string checkpoint;  // "k=12", "seed=7", "mean"
  double observed = 0.0;
  double envelope = 0.0;
  double margin = 0.0;  // tolerance applied on top of the envelope
  bool pass = false;
  bool verifiable = true;
  std::string note;
};

struct BoundReport {
  BoundKind kind = BoundKind::Base;
  std::vector<BoundRow> rows;

  bool all_pass() const;
  bool all_verifiable() const;
};

/// Check the theoretical envelope of the given kind against one or more
/// traces.  Missing fields (f*, R^2, parameters) produce explicit
/// unverifiable rows rather than silent passes.
///
///   base         f(x_k) - f* <= 4 L R^2/(k+1)^2                per iteration
///   adaptive     f(x_k) - f* <= 8 L R^2/(k+1)^2                per iteration
///   inexact      F(x_k) - F* <= 8 L R^2/(k+1)^2 + 2 k delta    per iteration
///   stochastic   F(x_N) - F* <= 4 eps per run, plus the batch failure
///                fraction against 3 beta + normal-approximation margin
///   directional-mean   mean final gap <= 3 eps + 1.96 sd/sqrt(runs)
BoundReport verify_traces(const std::vector<Trace>& traces, BoundKind kind,
                          double tolerance = 1e-9);

}  // namespace mtm::bench

#endif  // MTM_VERIFY_HPP
