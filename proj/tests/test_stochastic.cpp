#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mtm/errors.hpp"
#include "mtm/problems.hpp"
#include "mtm/stochastic.hpp"
#include "test_util.hpp"

using namespace mtm;

namespace {

// Recompute the draws a step must have consumed: retries double L from the
// previous accepted constant over two, each with its own alpha and batch.
long long expected_step_draws(double A_prev, double L_prev_accepted, int retries,
                              const StochasticPlan& pl) {
  long long total = 0;
  double L_cand = L_prev_accepted / 2.0;
  for (int i = 0; i <= retries; ++i) {
    const double alpha = solve_alpha_adaptive(A_prev, L_cand);
    total += batch_size(pl.D, pl.Omega_tilde, alpha, pl.epsilon);
    L_cand *= 2.0;
  }
  return total;
}

}  // namespace

TEST_CASE("plan: formula arithmetic") {
  const StochasticPlan pl = plan(0.01, 0.05, 1.0, 1.0, 1.0);
  CHECK(pl.N == 35);  // ceil(2 sqrt(3) / 0.1) = ceil(34.64)
  CHECK(pl.Omega == doctest::Approx(std::sqrt(2.0 * std::log(35.0 / 0.05))).epsilon(1e-15));
  CHECK(pl.Omega == doctest::Approx(3.6193).epsilon(2e-4));
  CHECK(pl.Omega_tilde == doctest::Approx((1.0 + pl.Omega) * (1.0 + pl.Omega)).epsilon(1e-15));
  CHECK(pl.Omega_tilde == doctest::Approx(21.34).epsilon(2e-3));
  CHECK(pl.Omega >= std::sqrt(2.0) - 1.0);

  CHECK_THROWS_AS(plan(0.0, 0.05, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(plan(0.01, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(plan(0.01, 0.05, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("batch_size: ceiling with a floor of one") {
  CHECK(batch_size(1.0, 1.0, 2.5 / 3.0, 1.0) == 3);  // ceil(2.5)
  CHECK(batch_size(0.0, 21.0, 5.0, 0.01) == 1);      // clamped minimum
  CHECK(batch_size(1.0, 21.34, 0.5, 0.01) == 3201);  // exact-integer product
  CHECK(batch_size(1.0, 1.0, 2.0 / 3.0, 1.0) == 2);  // integer value stays put
  CHECK_THROWS_AS(batch_size(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("run_stochastic: preconditions") {
  const Problem box = problems::get_smooth("quad_box");
  const Problem free = problems::get_smooth("quad_well");
  const StochasticPlan pl = plan(0.01, 0.05, box.lipschitz, box.domain.diameter(), 1e-4);
  StochasticOracle oracle(DeltaLOracle(box, 0.0), 1e-4, 1);

  // unbounded feasible set
  StochasticOracle ofree(DeltaLOracle(free, 0.0), 1e-4, 1);
  CHECK_THROWS_AS(run_stochastic(ofree, Composite::zero(), ProxSetup::euclidean(),
                                 free.domain, free.x0, pl, free.lipschitz),
                  std::invalid_argument);
  // diameter larger than the planned D_Q
  const StochasticPlan small = plan(0.01, 0.05, box.lipschitz, 0.5, 1e-4);
  CHECK_THROWS_AS(run_stochastic(oracle, Composite::zero(), ProxSetup::euclidean(),
                                 box.domain, box.x0, small, box.lipschitz),
                  std::invalid_argument);
  // non-Euclidean prox only behind the explicit flag
  const Problem simp = problems::get_smooth("quad_simplex");
  const StochasticPlan pls = plan(0.01, 0.05, simp.lipschitz, simp.domain.diameter(), 0.0);
  StochasticOracle osimp(DeltaLOracle(simp, 0.0), 0.0, 1);
  CHECK_THROWS_AS(run_stochastic(osimp, Composite::zero(), ProxSetup::entropy_simplex(),
                                 simp.domain, simp.x0, pls, simp.lipschitz),
                  CapabilityError);
  StochasticRunOptions allow;
  allow.allow_unverified_prox = true;
  CHECK_NOTHROW(run_stochastic(osimp, Composite::zero(), ProxSetup::entropy_simplex(),
                               simp.domain, simp.x0, pls, simp.lipschitz, allow));
  // oracle delta above the admissible cap
  const double cap = StochasticPlan::delta_cap(0.01, box.lipschitz, pl.D_Q);
  StochasticOracle hot(DeltaLOracle(box, 2.0 * cap, PerturbationMode::Constant, 1), 1e-4, 1);
  CHECK_THROWS_AS(run_stochastic(hot, Composite::zero(), ProxSetup::euclidean(), box.domain,
                                 box.x0, pl, box.lipschitz),
                  std::invalid_argument);
}

TEST_CASE("run_stochastic: D = 0, delta = 0 degenerates to the exact method") {
  const Problem p = problems::get_smooth("quad_box");
  const StochasticPlan pl = plan(0.01, 0.05, p.lipschitz, p.domain.diameter(), 0.0);
  std::string first;
  for (const std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    StochasticOracle oracle(DeltaLOracle(p, 0.0), 0.0, seed);
    Trace t = run_stochastic(oracle, Composite::zero(), ProxSetup::euclidean(), p.domain,
                             p.x0, pl, p.lipschitz);
    CHECK(t.records.back().f_x - *p.f_star <= 4.0 * pl.epsilon);
    for (const auto& r : t.records)
      if (r.k > 0) CHECK(r.m_k == 1);
    t.seed = 0;  // normalize the seed field; everything else must agree
    const std::string s = t.serialize();
    if (first.empty())
      first = s;
    else
      CHECK(first == s);
  }
}

TEST_CASE("run_stochastic: seeded batch statistics and audits") {
  const Problem p = problems::get_smooth("quad_box");
  const double eps = 0.01, beta = 0.05, D = 9e-5, delta = 2e-5;
  const StochasticPlan pl = plan(eps, beta, p.lipschitz, p.domain.diameter(), D);
  REQUIRE(delta <= StochasticPlan::delta_cap(eps, p.lipschitz, pl.D_Q));

  const int n_seeds = 50;
  int failures = 0, calibrated = 0;
  long long batch_total = 0, batch_count = 0;
  const double m_bound =
      (4.0 + std::log2(3.0)) *
      (2.0 * std::sqrt(3.0) * std::sqrt(p.lipschitz) * pl.D_Q / std::sqrt(eps) +
       21.0 * D * pl.Omega_tilde * pl.D_Q * pl.D_Q / (eps * eps) + 1.0);

  for (int seed = 1; seed <= n_seeds; ++seed) {
    StochasticOracle oracle(DeltaLOracle(p, delta, PerturbationMode::Constant, seed), D, seed);
    const Trace t = run_stochastic(oracle, Composite::zero(), ProxSetup::euclidean(), p.domain,
                                   p.x0, pl, p.lipschitz);
    REQUIRE(static_cast<int>(t.records.size()) == pl.N + 1);
    if (t.records.back().f_x - *p.f_star > 4.0 * eps) ++failures;

    const double max_L = parse_double(t.config.at("max_L_accepted"));
    if (max_L < 3.0 * p.lipschitz) ++calibrated;
    bool all_below_3L = true;

    for (std::size_t i = 1; i < t.records.size(); ++i) {
      const auto& prev = t.records[i - 1];
      const auto& cur = t.records[i];
      // batch sizes match the formula exactly
      CHECK(cur.m_k == batch_size(D, pl.Omega_tilde, cur.alpha, eps));
      batch_total += cur.m_k;
      ++batch_count;
      // draw accounting: per-step draws equal the per-retry batches exactly
      const double L_prev = i == 1 ? p.lipschitz : prev.L_k;
      CHECK(cur.draws - prev.draws ==
            expected_step_draws(prev.A, L_prev, cur.retries, pl));
      if (cur.L_k >= 3.0 * p.lipschitz) all_below_3L = false;
    }
    if (all_below_3L) {
      // schedule growth under the high-probability event
      for (const auto& r : t.records)
        if (r.k > 0)
          CHECK(r.A >= (r.k + 1.0) * (r.k + 1.0) / (12.0 * p.lipschitz) * (1.0 - 1e-12));
    }
    // oracle-call audit against the plan-level bound, at the sufficient point
    const double draws_suff = parse_double(t.config.at("draws_at_sufficient"));
    REQUIRE(draws_suff >= 0);
    CHECK(draws_suff <= m_bound);
  }

  // empirical failure fraction below 3 beta plus the normal-approximation margin
  const double frac = static_cast<double>(failures) / n_seeds;
  const double p3 = 3.0 * beta;
  CHECK(frac <= p3 + 1.96 * std::sqrt(p3 * (1.0 - p3) / n_seeds));
  // calibration of the union-bound event: runs accepting only L < 3L
  CHECK(static_cast<double>(calibrated) / n_seeds >=
        1.0 - beta - 1.96 * std::sqrt(beta * (1.0 - beta) / n_seeds));
  // batches average in a sensible mini-batch regime for this configuration
  const double avg_m = static_cast<double>(batch_total) / batch_count;
  CHECK(avg_m >= 5.0);
  CHECK(avg_m <= 50.0);
}

TEST_CASE("run_stochastic: replay determinism") {
  const Problem p = problems::get_smooth("quad_box");
  const StochasticPlan pl = plan(0.02, 0.05, p.lipschitz, p.domain.diameter(), 1e-4);
  auto run_once = [&]() {
    StochasticOracle oracle(DeltaLOracle(p, 1e-5, PerturbationMode::SeededRandom, 123), 1e-4,
                            123);
    return run_stochastic(oracle, Composite::zero(), ProxSetup::euclidean(), p.domain, p.x0,
                          pl, p.lipschitz);
  };
  CHECK(run_once().serialize() == run_once().serialize());
}
