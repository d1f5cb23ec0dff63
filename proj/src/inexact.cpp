#include "mtm/inexact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

namespace {
constexpr double kExitSlack = 1e-12;
}

bool check_descent_inexact(const DeltaLOracle& oracle, const ProxSetup& setup,
                           const Vector& x_next, const Vector& y_next,
                           const Vector& g_tilde, double f_tilde, double L_candidate,
                           double slack) {
  if (slack < 0.0) throw std::invalid_argument("check_descent_inexact: slack must be >= 0");
  const double lhs = oracle.value(x_next);
  const double dist = setup.norm(x_next - y_next);
  const double rhs =
      f_tilde + g_tilde.dot(x_next - y_next) + 0.5 * L_candidate * dist * dist + slack;
  return lhs <= rhs + kExitSlack;
}

Trace run_inexact(const DeltaLOracle& oracle, const Composite& h, const ProxSetup& setup,
                  const FeasibleSet& Q, const Vector& x0, int N, double L0,
                  const InexactOptions& options) {
  if (!(L0 > 0.0)) throw std::invalid_argument("run_inexact: L0 must be positive");
  if (N < 0) throw std::invalid_argument("run_inexact: N must be >= 0");
  if (!Q.contains(x0)) throw std::invalid_argument("run_inexact: x0 is not in Q");
  if (options.mode == InexactMode::Universal && options.epsilon < 0.0)
    throw std::invalid_argument("run_inexact: universal mode needs epsilon >= 0");

  const Problem& base = oracle.problem();
  auto F = [&](const Vector& v) { return base.value(v) + h.value(v); };

  Trace trace;
  trace.solver_id = "inexact";
  trace.problem_id = base.id;
  trace.prox_id = to_string(setup.kind());
  trace.L = base.lipschitz;
  // The analytic optimum is only trusted for the plain objective; with a
  // nonzero composite the minimizer of F may move.
  if (h.is_zero()) {
    trace.f_star = base.f_star;
    if (base.x_star) trace.R2 = setup.bregman(*base.x_star, x0);
  }
  trace.config["L0"] = format_double(L0);
  trace.config["delta"] = format_double(oracle.delta());
  trace.config["mode"] =
      options.mode == InexactMode::FixedDelta ? "fixed_delta" : "universal";
  if (options.mode == InexactMode::Universal)
    trace.config["epsilon"] = format_double(options.epsilon);

  const double L_guard = std::ldexp(L0, options.guard_doublings);

  Vector x = x0, u = x0, y = x0;
  double A = 0.0;
  double L_next = L0 / 2.0;
  long long calls_f = 0, calls_g = 0;

  auto record = [&](int k, double alpha, double L_k, int retries, double slack) {
    TraceRecord r;
    r.k = k;
    r.f_x = F(x);
    r.f_y = F(y);
    r.alpha = alpha;
    r.A = A;
    r.L_k = L_k;
    r.calls_f = calls_f;
    r.calls_g = calls_g;
    r.retries = retries;
    r.slack = slack;
    if (h.is_zero() && base.x_star) r.V_to_opt = setup.bregman(*base.x_star, u);
    trace.records.push_back(r);
    if (options.observer) options.observer(k, x, y, u);
  };
  record(0, 0.0, L0, 0, 0.0);

  for (int k = 0; k < N; ++k) {
    double L_cand = L_next;
    int retries = 0;
    while (true) {
      if (L_cand > L_guard) {
        std::ostringstream os;
        os << "run_inexact: iteration " << (k + 1) << ": local constant " << L_cand
           << " exceeded 2^" << options.guard_doublings << " * L0";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      const double alpha = solve_alpha_adaptive(A, L_cand);
      const double A_next = A + alpha;
      if (!std::isfinite(alpha) || !std::isfinite(A_next)) {
        std::ostringstream os;
        os << "run_inexact: iteration " << (k + 1)
           << ": step weight overflow (local constant underflowed after exact "
              "convergence)";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      y = (alpha * u + A * x) / A_next;
      const auto [f_tilde, g_tilde] = oracle.eval(y);
      ++calls_f;
      ++calls_g;

      Vector u_cand;
      try {
        u_cand = prox_step(setup, Q, u, g_tilde, alpha, h);
      } catch (const SubproblemError& e) {
        std::ostringstream os;
        os << "run_inexact: iteration " << (k + 1) << ": " << e.what();
        throw SubproblemError(os.str(), e.best_iterate, e.residual);
      }
      const Vector x_cand = (alpha * u_cand + A * x) / A_next;

      const double slack = options.mode == InexactMode::FixedDelta
                               ? oracle.delta()
                               : (alpha / A_next) * options.epsilon;
      ++calls_f;
      if (check_descent_inexact(oracle, setup, x_cand, y, g_tilde, f_tilde, L_cand, slack)) {
        u = u_cand;
        x = x_cand;
        A = A_next;
        L_next = L_cand / 2.0;
        record(k + 1, alpha, L_cand, retries, slack);
        break;
      }
      L_cand *= 2.0;
      ++retries;
    }
  }
  return trace;
}

}  // namespace mtm
