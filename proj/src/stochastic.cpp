#include "mtm/stochastic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

namespace {
constexpr double kExitSlack = 1e-12;
}

double StochasticPlan::delta_cap(double epsilon, double L, double D_Q) {
  return std::pow(epsilon, 1.5) / (6.0 * std::sqrt(3.0) * std::sqrt(L) * D_Q);
}

StochasticPlan plan(double epsilon, double beta, double L, double D_Q, double D) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("plan: epsilon must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("plan: beta must be in (0, 1)");
  if (!(L > 0.0)) throw std::invalid_argument("plan: L must be positive");
  if (!(D_Q > 0.0) || !std::isfinite(D_Q))
    throw std::invalid_argument("plan: D_Q must be positive and finite");
  if (D < 0.0) throw std::invalid_argument("plan: D must be >= 0");

  StochasticPlan p;
  p.epsilon = epsilon;
  p.beta = beta;
  p.D_Q = D_Q;
  p.D = D;
  const double n_real = 2.0 * std::sqrt(3.0) * std::sqrt(L) * D_Q / std::sqrt(epsilon);
  p.N = static_cast<int>(std::ceil(n_real - 1e-9));
  p.Omega = std::sqrt(2.0 * std::log(static_cast<double>(p.N) / beta));
  const double omega_floor = std::sqrt(2.0) - 1.0;
  if (!(p.Omega >= omega_floor))
    throw std::invalid_argument("plan: beta too large for N steps (Omega < sqrt(2) - 1)");
  p.Omega_tilde = (1.0 + p.Omega) * (1.0 + p.Omega);
  return p;
}

long long batch_size(double D, double Omega_tilde, double alpha_next, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("batch_size: epsilon must be positive");
  const double v = 3.0 * D * Omega_tilde * alpha_next / epsilon;
  // Back off one nano so a value that is an integer in exact arithmetic is
  // not pushed up by the last rounding.
  const long long m = static_cast<long long>(std::ceil(v - 1e-9));
  return std::max<long long>(1, m);
}

Trace run_stochastic(const StochasticOracle& oracle, const Composite& h,
                     const ProxSetup& setup, const FeasibleSet& Q, const Vector& x0,
                     const StochasticPlan& plan, double L,
                     const StochasticRunOptions& options) {
  if (!(L > 0.0)) throw std::invalid_argument("run_stochastic: L must be positive");
  if (!Q.contains(x0)) throw std::invalid_argument("run_stochastic: x0 is not in Q");
  if (!Q.bounded())
    throw std::invalid_argument("run_stochastic: Q must be bounded (D_Q required)");
  if (Q.diameter() > plan.D_Q * (1.0 + 1e-12))
    throw std::invalid_argument("run_stochastic: Q diameter exceeds plan.D_Q");
  if (setup.kind() != ProxKind::Euclidean && !options.allow_unverified_prox)
    throw CapabilityError(
        "run_stochastic: theory requires the Euclidean norm; pass "
        "allow_unverified_prox to experiment outside it");
  const double delta = oracle.inner().delta();
  const double cap = StochasticPlan::delta_cap(plan.epsilon, L, plan.D_Q);
  if (delta > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "run_stochastic: oracle delta " << delta << " exceeds the admissible "
       << cap << " for epsilon " << plan.epsilon;
    throw std::invalid_argument(os.str());
  }

  const Problem& base = oracle.inner().problem();
  auto F = [&](const Vector& v) { return base.value(v) + h.value(v); };

  Trace trace;
  trace.solver_id = "stochastic";
  trace.problem_id = base.id;
  trace.prox_id = to_string(setup.kind());
  trace.L = L;
  if (h.is_zero()) {
    trace.f_star = base.f_star;
    if (base.x_star) trace.R2 = setup.bregman(*base.x_star, x0);
  }
  trace.seed = oracle.seed();
  trace.config["epsilon"] = format_double(plan.epsilon);
  trace.config["beta"] = format_double(plan.beta);
  trace.config["D"] = format_double(plan.D);
  trace.config["D_Q"] = format_double(plan.D_Q);
  trace.config["delta"] = format_double(delta);
  trace.config["Omega_tilde"] = format_double(plan.Omega_tilde);

  const double L0 = L;
  const double L_guard = std::ldexp(L0, options.guard_doublings);

  Vector x = x0, u = x0, y = x0;
  double A = 0.0;
  double L_next = L / 2.0;  // the algorithm starts from L_1 = L/2
  long long calls_f = 0, calls_g = 0, draws = 0;
  double max_L_accepted = 0.0;
  bool exit_failed_above_15L = false;
  // First step where D_Q^2/A_k <= eps: a sufficient epsilon-solution point;
  // the oracle-call remark counts draws up to here.
  long long draws_at_sufficient = -1;
  int steps_at_sufficient = -1;

  auto record = [&](int k, double alpha, double L_k, long long m, int retries, double slack) {
    TraceRecord r;
    r.k = k;
    r.f_x = F(x);
    r.f_y = F(y);
    r.alpha = alpha;
    r.A = A;
    r.L_k = L_k;
    r.m_k = m;
    r.calls_f = calls_f;
    r.calls_g = calls_g;
    r.retries = retries;
    r.slack = slack;
    r.draws = draws;
    if (h.is_zero() && base.x_star) r.V_to_opt = setup.bregman(*base.x_star, u);
    trace.records.push_back(r);
    if (options.observer) options.observer(k, x, y, u);
  };
  record(0, 0.0, L_next, 0, 0, 0.0);

  for (int k = 0; k < plan.N; ++k) {
    double L_cand = L_next;
    int retries = 0;
    while (true) {
      if (L_cand > L_guard) {
        std::ostringstream os;
        os << "run_stochastic: iteration " << (k + 1) << ": local constant " << L_cand
           << " exceeded 2^" << options.guard_doublings << " * L";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      const double alpha = solve_alpha_adaptive(A, L_cand);
      const double A_next = A + alpha;
      if (!std::isfinite(alpha) || !std::isfinite(A_next)) {
        std::ostringstream os;
        os << "run_stochastic: iteration " << (k + 1)
           << ": step weight overflow (local constant underflowed after exact "
              "convergence)";
        throw DivergenceError(os.str(), L_cand, k + 1);
      }
      y = (alpha * u + A * x) / A_next;

      const long long m = batch_size(plan.D, plan.Omega_tilde, alpha, plan.epsilon);
      // Fresh batch per retry: the exit-condition slack depends on L_cand and
      // m, and the (step, retry) keying keeps every replay bit-identical.
      const Vector g_tilde = oracle.mini_batch_keyed(
          y, static_cast<int>(m), static_cast<std::uint64_t>(k + 1),
          static_cast<std::uint64_t>(retries));
      draws += m;
      ++calls_g;
      const double f_tilde = oracle.inner().value(y);
      ++calls_f;

      Vector u_cand;
      try {
        u_cand = prox_step(setup, Q, u, g_tilde, alpha, h);
      } catch (const SubproblemError& e) {
        std::ostringstream os;
        os << "run_stochastic: iteration " << (k + 1) << ": " << e.what();
        throw SubproblemError(os.str(), e.best_iterate, e.residual);
      }
      const Vector x_cand = (alpha * u_cand + A * x) / A_next;

      const double stochastic_slack =
          3.0 * plan.D * plan.Omega_tilde / (L_cand * static_cast<double>(m));
      const double lhs = oracle.inner().value(x_cand);
      ++calls_f;
      const double dist = setup.norm(x_cand - y);
      const double rhs = f_tilde + g_tilde.dot(x_cand - y) + 0.5 * L_cand * dist * dist +
                         stochastic_slack + delta;
      if (lhs <= rhs + kExitSlack) {
        u = u_cand;
        x = x_cand;
        A = A_next;
        L_next = L_cand / 2.0;
        max_L_accepted = std::max(max_L_accepted, L_cand);
        record(k + 1, alpha, L_cand, m, retries, stochastic_slack + delta);
        if (draws_at_sufficient < 0 && plan.D_Q * plan.D_Q / A <= plan.epsilon) {
          draws_at_sufficient = draws;
          steps_at_sufficient = k + 1;
        }
        break;
      }
      if (L_cand >= 1.5 * L) exit_failed_above_15L = true;
      L_cand *= 2.0;
      ++retries;
    }
  }

  trace.config["max_L_accepted"] = format_double(max_L_accepted);
  trace.config["exit_failed_above_1.5L"] = exit_failed_above_15L ? "1" : "0";
  trace.config["total_draws"] = std::to_string(draws);
  trace.config["draws_at_sufficient"] = std::to_string(draws_at_sufficient);
  trace.config["steps_at_sufficient"] = std::to_string(steps_at_sufficient);
  return trace;
}

}  // namespace mtm
