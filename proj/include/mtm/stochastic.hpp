#ifndef MTM_STOCHASTIC_HPP
#define MTM_STOCHASTIC_HPP

#include "mtm/minimax.hpp"
#include "mtm/oracle.hpp"
#include "mtm/trace.hpp"

namespace mtm {

/// Run plan of the mini-batched stochastic method:
///   N = ceil(2 sqrt(3) sqrt(L) D_Q / sqrt(eps)),
///   Omega = sqrt(2 ln(N / beta)),  Omega_tilde = (1 + Omega)^2.
struct StochasticPlan {
  double epsilon = 0.0;
  double beta = 0.0;
  int N = 0;
  double Omega = 0.0;
  double Omega_tilde = 0.0;
  double D_Q = 0.0;
  double D = 0.0;

  /// Largest oracle inexactness the 4-epsilon theorem tolerates:
  /// eps^{3/2} / (6 sqrt(3) sqrt(L) D_Q).
  static double delta_cap(double epsilon, double L, double D_Q);
};

StochasticPlan plan(double epsilon, double beta, double L, double D_Q, double D);

/// m_{k+1} = max(1, ceil(3 D Omega_tilde alpha_{k+1} / epsilon)).
long long batch_size(double D, double Omega_tilde, double alpha_next, double epsilon);

struct StochasticRunOptions {
  /// The theory covers the Euclidean norm only; any other prox runs solely
  /// behind this flag and is excluded from acceptance.
  bool allow_unverified_prox = false;
  int guard_doublings = 60;
  RunObserver observer;
};

/// Mini-batched stochastic mirror triangles method.  Q must be bounded with
/// Euclidean diameter <= plan.D_Q and the oracle's delta must respect
/// StochasticPlan::delta_cap.  The trace's config carries the per-run
/// high-probability bookkeeping ("max_L_accepted", "exit_failed_above_1.5L").
Trace run_stochastic(const StochasticOracle& oracle, const Composite& h,
                     const ProxSetup& setup, const FeasibleSet& Q, const Vector& x0,
                     const StochasticPlan& plan, double L,
                     const StochasticRunOptions& options = {});

}  // namespace mtm

#endif  // MTM_STOCHASTIC_HPP
