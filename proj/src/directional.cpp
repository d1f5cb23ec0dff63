#include "mtm/directional.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

std::pair<double, double> directional_schedule(int n, int k) {
  if (n < 1) throw std::invalid_argument("directional_schedule: n must be >= 1");
  if (k < 0) throw std::invalid_argument("directional_schedule: k must be >= 0");
  const double nn = static_cast<double>(n);
  if (k == 0) {
    const double a0 = 1.0 - 1.0 / nn;
    return {a0, a0};
  }
  const double s = static_cast<double>(k - 1) + 2.0 * nn;  // k - 1 + 2n
  const double alpha = s / (2.0 * nn * nn);
  const double A = (s * s + static_cast<double>(k - 1)) / (4.0 * nn * nn);
  return {alpha, A};
}

P0Budget P0Budget::from(double R0, double gap0, int n) {
  if (R0 < 0.0 || gap0 < 0.0) throw std::invalid_argument("P0Budget: negative inputs");
  if (n < 1) throw std::invalid_argument("P0Budget: n must be >= 1");
  P0Budget b;
  b.R0 = R0;
  b.gap0 = gap0;
  b.P0 = std::sqrt(R0 * R0 + 2.0 * (1.0 - 1.0 / n) * gap0);
  return b;
}

DirectionalPlan plan_directional(double P0, double epsilon, int n, double L) {
  if (!(P0 > 0.0)) throw std::invalid_argument("plan_directional: P0 must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("plan_directional: epsilon must be positive");
  if (n < 1) throw std::invalid_argument("plan_directional: n must be >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("plan_directional: L must be positive");

  DirectionalPlan p;
  p.P0 = P0;
  p.epsilon = epsilon;
  p.n = n;
  p.L = L;
  const double n_real = std::sqrt(2.0) * n * P0 / std::sqrt(epsilon) + 1.0 - 2.0 * n;
  const double delta1 =
      std::pow(epsilon, 0.75) * std::sqrt(L) / (4.0 * std::pow(2.0, 0.25) * std::sqrt(n * P0));
  const double delta2 = std::pow(epsilon, 1.5) * std::sqrt(L) /
                        (96.0 * std::sqrt(static_cast<double>(n)) * P0 * P0);
  p.delta_max = std::min(delta1, delta2);
  if (n_real <= 0.0) {
    // epsilon >= P0^2/2: the start point already meets the target.
    p.N = 0;
    p.already_solved = true;
    return p;
  }
  p.N = static_cast<int>(std::ceil(n_real - 1e-9));
  p.already_solved = p.N <= 0;
  if (p.already_solved) p.N = 0;
  return p;
}

std::vector<double> gamma_weights(int n, int k) {
  if (k < 0) throw std::invalid_argument("gamma_weights: k must be >= 0");
  std::vector<double> g{1.0};
  if (k == 0) return g;
  g = {0.0, 1.0};
  auto ratio = [n](int j) {
    const auto [alpha, A] = directional_schedule(n, j);
    return alpha / A;
  };
  for (int j = 1; j < k; ++j) {
    // build gamma_{j+1} from gamma_j
    const double r_next = ratio(j + 1);
    const double r_cur = ratio(j);
    std::vector<double> next(j + 2);
    for (int l = 0; l <= j - 1; ++l) next[l] = (1.0 - r_next) * g[l];
    next[j] = r_next * (1.0 - n * r_cur) + n * (r_cur - r_next);
    next[j + 1] = n * r_next;
    g = std::move(next);
  }
  return g;
}

namespace {

// Shared loop for the directional method; the estimator callback returns the
// oracle answer for step k+1 at point y given direction e.
template <typename Estimator>
Trace run_directional_loop(const Problem& problem, const Vector& x0,
                           const DirectionalPlan& plan, double L,
                           const DirectionScheme& scheme, const RunObserver& observer,
                           const char* solver_id, Estimator&& estimate,
                           long long f_calls_per_step, long long g_calls_per_step) {
  if (!(L > 0.0)) throw std::invalid_argument("run_directional: L must be positive");
  if (problem.domain.kind() != FeasibleSet::Kind::WholeSpace)
    throw CapabilityError("run_directional: theory covers Q = R^n only");
  const int n = scheme.dimension();
  if (n != static_cast<int>(x0.size()))
    throw std::invalid_argument("run_directional: scheme dimension mismatch");

  const ProxSetup setup = ProxSetup::scaled_euclidean(L);
  const FeasibleSet Q = FeasibleSet::whole_space(n);

  Trace trace;
  trace.solver_id = solver_id;
  trace.problem_id = problem.id;
  trace.prox_id = to_string(setup.kind());
  trace.L = L;
  trace.f_star = problem.f_star;
  if (problem.x_star) trace.R2 = setup.bregman(*problem.x_star, x0);
  trace.seed = scheme.seed();
  trace.config["epsilon"] = format_double(plan.epsilon);
  trace.config["P0"] = format_double(plan.P0);
  trace.config["scheme"] =
      scheme.kind() == DirectionKind::UniformSphere ? "sphere" : "coordinate";

  Vector x = x0, u = x0, y = x0;
  auto [alpha0, A0] = directional_schedule(n, 0);
  double A = A0;
  long long calls_f = 0, calls_g = 0;

  auto record = [&](int k, double alpha) {
    TraceRecord r;
    r.k = k;
    r.f_x = problem.value(x);
    r.f_y = problem.value(y);
    r.alpha = alpha;
    r.A = A;
    r.L_k = L;
    r.calls_f = calls_f;
    r.calls_g = calls_g;
    if (problem.x_star) r.V_to_opt = setup.bregman(*problem.x_star, u);
    trace.records.push_back(r);
    if (observer) observer(k, x, y, u);
  };
  record(0, alpha0);

  for (int k = 0; k < plan.N; ++k) {
    // The schedule is explicit, so alpha_{k+1} exists before y_{k+1}; the
    // direction is sampled only after y_{k+1} is formed.
    const auto [alpha, A_next] = directional_schedule(n, k + 1);
    y = (alpha * u + A * x) / A_next;
    const Vector e = scheme.sample_at(static_cast<std::uint64_t>(k + 1));
    const Vector g_tilde = estimate(k, y, e);
    calls_f += f_calls_per_step;
    calls_g += g_calls_per_step;

    const Vector u_next = prox_step(setup, Q, u, g_tilde, alpha);
    x = y + (n * alpha / A_next) * (u_next - u);
    u = u_next;
    A = A_next;
    record(k + 1, alpha);
  }
  return trace;
}

}  // namespace

Trace run_directional(const Problem& problem, const Vector& x0, const DirectionalPlan& plan,
                      double L, const DirectionScheme& scheme, double delta,
                      const DirectionalOptions& options) {
  if (delta < 0.0) throw std::invalid_argument("run_directional: delta must be >= 0");
  if (delta > plan.delta_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "run_directional: noise level " << delta << " exceeds the plan bound "
       << plan.delta_max;
    throw std::invalid_argument(os.str());
  }
  SplitRng noise_base(options.noise_seed, 0xd13ec7ULL);
  auto estimate = [&](int k, const Vector& y, const Vector& e) {
    double noise = 0.0;
    if (delta > 0.0) {
      SplitRng rng = noise_base.substream(static_cast<std::uint64_t>(k + 1));
      noise = rng.uniform(-delta, delta);
    }
    return directional_eval(problem, y, e, noise, delta);
  };
  Trace t = run_directional_loop(problem, x0, plan, L, scheme, options.observer,
                                 "directional", estimate, 0, 1);
  t.config["delta"] = format_double(delta);
  return t;
}

double zeroth_order_delta_cap(double epsilon, int n, double P0) {
  const double c1 = std::pow(epsilon, 1.5) / (64.0 * std::sqrt(2.0) * n * P0);
  const double c2 = std::pow(epsilon, 3.0) / (36864.0 * n * std::pow(P0, 4.0));
  return std::min(c1, c2);
}

Trace run_zeroth_order(const Problem& problem, const Vector& x0, double epsilon,
                       double delta_eval, double L, const DirectionScheme& scheme,
                       const ZerothOrderOptions& options) {
  if (delta_eval < 0.0) throw std::invalid_argument("run_zeroth_order: delta_eval must be >= 0");
  const int n = scheme.dimension();

  double P0;
  if (options.P0_override) {
    P0 = *options.P0_override;
  } else {
    if (!problem.x_star || !problem.f_star)
      throw std::invalid_argument(
          "run_zeroth_order: problem has no analytic optimum; supply a P0 upper bound");
    const double R0 = std::sqrt(L) * (x0 - *problem.x_star).norm();
    P0 = P0Budget::from(R0, problem.value(x0) - *problem.f_star, n).P0;
  }

  const double cap = zeroth_order_delta_cap(epsilon, n, P0);
  if (delta_eval > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "run_zeroth_order: delta_eval " << delta_eval << " exceeds the admissible maximum "
       << cap << " for epsilon " << epsilon << ", n " << n << ", P0 " << P0;
    throw std::invalid_argument(os.str());
  }

  DirectionalPlan plan = plan_directional(P0, epsilon, n, L);
  // Induced directional noise at the optimal step: delta_hat = 2 sqrt(L d).
  const double delta_hat = 2.0 * std::sqrt(L * delta_eval);
  if (delta_hat > plan.delta_max * (1.0 + 1e-12))
    throw std::logic_error("run_zeroth_order: induced noise exceeds plan.delta_max");

  SplitRng noise_base(options.noise_seed, 0x2e20077ULL);
  auto estimate = [&](int k, const Vector& y, const Vector& e) {
    double tau, d1 = 0.0, d2 = 0.0;
    if (delta_eval > 0.0) {
      tau = 2.0 * std::sqrt(delta_eval / L);
      SplitRng rng = noise_base.substream(static_cast<std::uint64_t>(k + 1));
      d1 = rng.uniform(-delta_eval, delta_eval);
      d2 = rng.uniform(-delta_eval, delta_eval);
    } else {
      // 0/0 in the optimal step size; standard finite-difference scale.
      tau = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + y.norm());
    }
    return finite_diff_eval(problem, y, e, tau, d1, d2);
  };
  Trace t = run_directional_loop(problem, x0, plan, L, scheme, options.observer,
                                 "zeroth_order", estimate, 2, 0);
  t.config["delta_eval"] = format_double(delta_eval);
  t.config["delta_hat"] = format_double(delta_hat);
  return t;
}

}  // namespace mtm
