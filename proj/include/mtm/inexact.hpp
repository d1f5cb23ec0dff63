#ifndef MTM_INEXACT_HPP
#define MTM_INEXACT_HPP

#include "mtm/minimax.hpp"
#include "mtm/oracle.hpp"
#include "mtm/trace.hpp"

namespace mtm {

enum class InexactMode { FixedDelta, Universal };

/// Exit condition driven by the inexact oracle:
///   f_delta(x_next) <= f_tilde + <g_tilde, x_next - y_next>
///                     + L_candidate/2 |x_next - y_next|^2 + slack + 1e-12.
/// slack is delta in fixed mode and (alpha_{k+1}/A_{k+1}) epsilon in
/// universal mode.
bool check_descent_inexact(const DeltaLOracle& oracle, const ProxSetup& setup,
                           const Vector& x_next, const Vector& y_next,
                           const Vector& g_tilde, double f_tilde, double L_candidate,
                           double slack);

struct InexactOptions {
  InexactMode mode = InexactMode::FixedDelta;
  double epsilon = 0.0;  // universal-mode accuracy target
  int guard_doublings = 60;
  RunObserver observer;
};

/// Mirror triangles method with a (delta, L)-oracle; composite objective
/// F = f + h.  Trace objective columns report the true F.
Trace run_inexact(const DeltaLOracle& oracle, const Composite& h, const ProxSetup& setup,
                  const FeasibleSet& Q, const Vector& x0, int N, double L0,
                  const InexactOptions& options = {});

}  // namespace mtm

#endif  // MTM_INEXACT_HPP
