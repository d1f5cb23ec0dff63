#include "mtm/minimax.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

namespace {
constexpr double kExitSlack = 1e-12;  // absolute acceptance slack of the exit test
}

double solve_alpha_adaptive(double A_k, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("solve_alpha_adaptive: L must be positive");
  if (A_k < 0.0) throw std::invalid_argument("solve_alpha_adaptive: A_k must be >= 0");
  const long double l = L;
  return static_cast<double>(0.5L / l + hypotl(0.5L / l, sqrtl(static_cast<long double>(A_k) / l)));
}

bool check_descent(const MinimaxProblem& problem, const ProxSetup& setup,
                   const Vector& x_next, const Vector& y_next, const LinearModel& model,
                   double L_candidate) {
  const double lhs = problem.value(x_next);
  const double dist = setup.norm(x_next - y_next);
  const double rhs =
      model.value(x_next) + 0.5 * L_candidate * dist * dist + problem.h.value(x_next);
  return lhs <= rhs + kExitSlack;
}

Trace run_adaptive_minimax(const MinimaxProblem& problem, const ProxSetup& setup,
                           const FeasibleSet& Q, const Vector& x0, int N, double L0,
                           const AdaptiveOptions& options) {
  if (!(L0 > 0.0)) throw std::invalid_argument("run_adaptive_minimax: L0 must be positive");
  if (N < 0) throw std::invalid_argument("run_adaptive_minimax: N must be >= 0");
  if (!Q.contains(x0)) throw std::invalid_argument("run_adaptive_minimax: x0 is not in Q");

  Trace trace;
  trace.solver_id = "minimax";
  trace.problem_id = problem.id;
  trace.prox_id = to_string(setup.kind());
  trace.L = problem.lipschitz;
  trace.f_star = problem.f_star;
  if (problem.x_star) trace.R2 = setup.bregman(*problem.x_star, x0);
  trace.config["L0"] = format_double(L0);

  const double L_guard = std::ldexp(L0, options.guard_doublings);

  Vector x = x0, u = x0, y = x0;
  double A = 0.0;
  double L_next = L0 / 2.0;
  long long calls_f = 0, calls_g = 0;

  auto record = [&](int k, double alpha, double L_k, int retries) {
    TraceRecord r;
    r.k = k;
    r.f_x = problem.value(x);
    r.f_y = problem.value(y);
    r.alpha = alpha;
    r.A = A;
    r.L_k = L_k;
    r.calls_f = calls_f;
    r.calls_g = calls_g;
    r.retries = retries;
    if (problem.x_star) r.V_to_opt = setup.bregman(*problem.x_star, u);
    trace.records.push_back(r);
    if (options.observer) options.observer(k, x, y, u);
  };
  record(0, 0.0, L0, 0);

  for (int k = 0; k < N; ++k) {
    double L_cand = L_next;
    int retries = 0;
    while (true) {
      if (L_cand > L_guard) {
        std::ostringstream os;
        os << "run_adaptive_minimax: iteration " << (k + 1) << ": local constant " << L_cand
           << " exceeded 2^" << options.guard_doublings << " * L0; gradient is likely "
           << "not Lipschitz on Q";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      const double alpha = solve_alpha_adaptive(A, L_cand);
      const double A_next = A + alpha;
      if (!std::isfinite(alpha) || !std::isfinite(A_next)) {
        std::ostringstream os;
        os << "run_adaptive_minimax: iteration " << (k + 1)
           << ": step weight overflow (local constant underflowed after exact "
              "convergence)";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      y = (alpha * u + A * x) / A_next;
      const LinearModel model = problem.model_at(y);
      ++calls_f;
      ++calls_g;

      Vector u_cand;
      try {
        u_cand = minimax_prox_step(setup, Q, u, model, alpha, problem.h, options.subproblem);
      } catch (const SubproblemError& e) {
        std::ostringstream os;
        os << "run_adaptive_minimax: iteration " << (k + 1) << ": " << e.what();
        throw SubproblemError(os.str(), e.best_iterate, e.residual);
      }
      const Vector x_cand = (alpha * u_cand + A * x) / A_next;

      ++calls_f;  // exit check evaluates all components at x_cand
      if (check_descent(problem, setup, x_cand, y, model, L_cand)) {
        u = u_cand;
        x = x_cand;
        A = A_next;
        L_next = L_cand / 2.0;
        record(k + 1, alpha, L_cand, retries);
        break;
      }
      L_cand *= 2.0;
      ++retries;
    }
  }
  return trace;
}

MinimaxProblem reformulate_constrained(const Problem& f, double f_star,
                                       const std::vector<Component>& constraints) {
  if (!std::isfinite(f_star))
    throw std::invalid_argument("reformulate_constrained: f_star must be finite");
  MinimaxProblem p;
  p.id = f.id + "_constrained";
  p.dim = f.dim;
  auto value = f.value;
  p.components.push_back(
      {[value, f_star](const Vector& x) { return value(x) - f_star; }, f.grad});
  for (const auto& g : constraints) p.components.push_back(g);
  p.h = Composite::zero();
  p.lipschitz = f.lipschitz;
  p.domain = f.domain;
  p.x0 = f.x0;
  return p;
}

}  // namespace mtm
