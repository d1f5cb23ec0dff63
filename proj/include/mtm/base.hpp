#ifndef MTM_BASE_HPP
#define MTM_BASE_HPP

#include <optional>
#include <vector>

#include "mtm/problem.hpp"
#include "mtm/trace.hpp"

namespace mtm {

/// Next step weight for a fixed constant L:
///   alpha_{k+1} = 1/(2L) + sqrt(1/(4L^2) + alpha_k^2).
/// The fused square root avoids overflow for large partial sums; computed in
/// long double.
double next_alpha(double L, double alpha_k);

/// Same root written through the partial sum: (1 + sqrt(1 + 4 L A)) / (2L).
/// Algebraically equal to next_alpha when A = L alpha^2.
double next_alpha_from_sum(double L, double A_k);

/// Fixed-L coefficient schedule: alpha_0 = 0, A_k = sum of alphas.
/// Accumulated in long double so the k <= 1e4 identity checks stay at
/// rounding level.
struct StepSchedule {
  double L = 0.0;
  std::vector<double> alphas;
  std::vector<double> A;

  static StepSchedule fixed(double L, int steps);
};

struct BaseOptions {
  /// Stop early once the certified envelope 4 L R^2 / (k+1)^2 falls below
  /// this accuracy (requires a known optimum for R^2).
  std::optional<double> target_accuracy;
  RunObserver observer;
};

/// Base mirror triangles method with known L.
Trace run_base(const Problem& problem, const ProxSetup& setup, const FeasibleSet& Q,
               const Vector& x0, int N, double L, const BaseOptions& options = {});

}  // namespace mtm

#endif  // MTM_BASE_HPP
