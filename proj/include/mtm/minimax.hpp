#ifndef MTM_MINIMAX_HPP
#define MTM_MINIMAX_HPP

#include <functional>
#include <vector>

#include "mtm/problem.hpp"
#include "mtm/trace.hpp"

namespace mtm {

/// Largest root of  A_k + alpha = L alpha^2, i.e. (1 + sqrt(1 + 4 L A_k)) / (2L).
double solve_alpha_adaptive(double A_k, double L);

/// The backtracking exit condition: true iff
///   f(x_next) <= max_j[v_j + <g_j, x_next - y_next>]
///               + L_candidate/2 |x_next - y_next|^2 + h(x_next) + 1e-12,
/// with |.| the norm of the prox setup.
bool check_descent(const MinimaxProblem& problem, const ProxSetup& setup,
                   const Vector& x_next, const Vector& y_next, const LinearModel& model,
                   double L_candidate);

struct AdaptiveOptions {
  /// L_k exceeding 2^guard_doublings * L0 raises DivergenceError.
  int guard_doublings = 60;
  MinimaxProxOptions subproblem;
  RunObserver observer;
};

/// Adaptive mirror triangles method for max_j f_j(x) + h(x) with
/// doubling/halving search for the local constant L_k.
Trace run_adaptive_minimax(const MinimaxProblem& problem, const ProxSetup& setup,
                           const FeasibleSet& Q, const Vector& x0, int N, double L0,
                           const AdaptiveOptions& options = {});

/// Known-optimum constrained problem  min f s.t. g_j <= 0  recast as
/// min max{f - f_star, g_1, ..., g_K} with optimal value 0.
MinimaxProblem reformulate_constrained(const Problem& f, double f_star,
                                       const std::vector<Component>& constraints);

}  // namespace mtm

#endif  // MTM_MINIMAX_HPP
