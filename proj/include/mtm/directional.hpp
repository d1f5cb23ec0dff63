#ifndef MTM_DIRECTIONAL_HPP
#define MTM_DIRECTIONAL_HPP

#include <utility>
#include <vector>

#include "mtm/minimax.hpp"
#include "mtm/oracle.hpp"
#include "mtm/trace.hpp"

namespace mtm {

/// Closed-form coefficient schedule of the directional method:
///   alpha_0 = 1 - 1/n,  alpha_k = (k - 1 + 2n) / (2 n^2) for k >= 1,
///   A_k = ((k - 1 + 2n)^2 + k - 1) / (4 n^2) for k >= 1.
std::pair<double, double> directional_schedule(int n, int k);

/// 1/2 P0^2 = 1/2 R0^2 + (1 - 1/n)(f(x0) - f*), with R0 = |u0 - x*|_L.
struct P0Budget {
  double R0 = 0.0;
  double gap0 = 0.0;
  double P0 = 0.0;

  static P0Budget from(double R0, double gap0, int n);
};

struct DirectionalPlan {
  int N = 0;
  double delta_max = 0.0;
  bool already_solved = false;  // N <= 0: x0 is already an epsilon-solution
  double P0 = 0.0;
  double epsilon = 0.0;
  int n = 0;
  double L = 0.0;
};

/// N = ceil(sqrt(2) n P0 / sqrt(eps) + 1 - 2n) and the admissible noise bound
/// delta_max = min{ eps^{3/4} sqrt(L) / (4 2^{1/4} sqrt(n P0)),
///                  eps^{3/2} sqrt(L) / (96 sqrt(n) P0^2) }.
DirectionalPlan plan_directional(double P0, double epsilon, int n, double L);

/// Convex-combination weights gamma_k^l with x_k = sum_l gamma_k^l u_l.
std::vector<double> gamma_weights(int n, int k);

struct DirectionalOptions {
  RunObserver observer;
  std::uint64_t noise_seed = 0;
};

/// Directional-derivative mirror triangles method on R^n under the |.|_L
/// norm.  The oracle answer is n(<grad f(y), e> + noise) e with |noise| <=
/// delta and directions drawn from the scheme's iteration-keyed substreams.
Trace run_directional(const Problem& problem, const Vector& x0, const DirectionalPlan& plan,
                      double L, const DirectionScheme& scheme, double delta,
                      const DirectionalOptions& options = {});

struct ZerothOrderOptions {
  RunObserver observer;
  std::uint64_t noise_seed = 0;
  /// P0 upper bound override for problems without an analytic optimum.
  std::optional<double> P0_override;
};

/// Zeroth-order specialization: two function values per step through the
/// finite difference at tau = 2 sqrt(delta_eval / L); delta_eval = 0 falls
/// back to tau = sqrt(machine epsilon) (1 + |y|).
Trace run_zeroth_order(const Problem& problem, const Vector& x0, double epsilon,
                       double delta_eval, double L, const DirectionScheme& scheme,
                       const ZerothOrderOptions& options = {});

/// Admissible evaluation-noise bound of the zeroth-order corollary:
/// min{ eps^{3/2} / (64 sqrt(2) n P0), eps^3 / (36864 n P0^4) }.
double zeroth_order_delta_cap(double epsilon, int n, double P0);

}  // namespace mtm

#endif  // MTM_DIRECTIONAL_HPP
