#include "mtm/base.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

namespace {

long double next_alpha_ld(long double L, long double alpha_k) {
  return 0.5L / L + hypotl(0.5L / L, alpha_k);
}

}  // namespace

double next_alpha(double L, double alpha_k) {
  if (!(L > 0.0)) throw std::invalid_argument("next_alpha: L must be positive");
  if (alpha_k < 0.0) throw std::invalid_argument("next_alpha: alpha_k must be >= 0");
  return static_cast<double>(next_alpha_ld(L, alpha_k));
}

double next_alpha_from_sum(double L, double A_k) {
  if (!(L > 0.0)) throw std::invalid_argument("next_alpha_from_sum: L must be positive");
  if (A_k < 0.0) throw std::invalid_argument("next_alpha_from_sum: A_k must be >= 0");
  const long double l = L;
  return static_cast<double>((1.0L + sqrtl(1.0L + 4.0L * l * A_k)) / (2.0L * l));
}

StepSchedule StepSchedule::fixed(double L, int steps) {
  if (!(L > 0.0)) throw std::invalid_argument("StepSchedule: L must be positive");
  if (steps < 0) throw std::invalid_argument("StepSchedule: steps must be >= 0");
  StepSchedule s;
  s.L = L;
  s.alphas.reserve(steps + 1);
  s.A.reserve(steps + 1);
  long double a = 0.0L, sum = 0.0L;
  s.alphas.push_back(0.0);
  s.A.push_back(0.0);
  for (int k = 0; k < steps; ++k) {
    a = next_alpha_ld(L, a);
    sum += a;
    s.alphas.push_back(static_cast<double>(a));
    s.A.push_back(static_cast<double>(sum));
  }
  return s;
}

Trace run_base(const Problem& problem, const ProxSetup& setup, const FeasibleSet& Q,
               const Vector& x0, int N, double L, const BaseOptions& options) {
  if (!(L > 0.0)) throw std::invalid_argument("run_base: L must be positive");
  if (N < 0) throw std::invalid_argument("run_base: N must be >= 0");
  if (!Q.contains(x0)) throw std::invalid_argument("run_base: x0 is not in Q");

  Trace trace;
  trace.solver_id = "base";
  trace.problem_id = problem.id;
  trace.prox_id = to_string(setup.kind());
  trace.L = L;
  trace.f_star = problem.f_star;
  if (problem.x_star) trace.R2 = setup.bregman(*problem.x_star, x0);

  Vector x = x0, u = x0, y = x0;
  long double alpha_ld = 0.0L, A_ld = 0.0L;
  long long calls_g = 0;

  auto record = [&](int k) {
    TraceRecord r;
    r.k = k;
    r.f_x = problem.value(x);
    r.f_y = problem.value(y);
    r.alpha = static_cast<double>(alpha_ld);
    r.A = static_cast<double>(A_ld);
    r.L_k = L;
    r.calls_g = calls_g;
    if (problem.x_star) r.V_to_opt = setup.bregman(*problem.x_star, u);
    trace.records.push_back(r);
    if (options.observer) options.observer(k, x, y, u);
  };
  record(0);

  for (int k = 0; k < N; ++k) {
    const long double A_prev = A_ld;
    alpha_ld = next_alpha_ld(L, alpha_ld);
    A_ld = A_prev + alpha_ld;
    const double alpha = static_cast<double>(alpha_ld);
    const double A_next = static_cast<double>(A_ld);
    const double A_k = static_cast<double>(A_prev);

    y = (alpha * u + A_k * x) / A_next;
    const Vector g = problem.grad(y);
    ++calls_g;
    try {
      u = prox_step(setup, Q, u, g, alpha);
    } catch (const SubproblemError& e) {
      std::ostringstream os;
      os << "run_base: iteration " << (k + 1) << ": " << e.what();
      throw SubproblemError(os.str(), e.best_iterate, e.residual);
    }
    x = (alpha * u + A_k * x) / A_next;
    record(k + 1);

    if (options.target_accuracy && trace.R2) {
      const double kk = static_cast<double>(k + 2);
      if (4.0 * L * *trace.R2 / (kk * kk) <= *options.target_accuracy) {
        trace.status = RunStatus::TargetReached;
        break;
      }
    }
  }
  return trace;
}

}  // namespace mtm
