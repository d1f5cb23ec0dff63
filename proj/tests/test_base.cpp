#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mtm/base.hpp"
#include "mtm/problems.hpp"
#include "test_util.hpp"

using namespace mtm;

TEST_CASE("next_alpha closed form") {
  CHECK(next_alpha(1.0, 0.0) == 1.0);
  CHECK(next_alpha(2.0, 0.0) == 0.5);
  // root of alpha^2 - alpha - 1 = 0, the golden ratio
  CHECK(next_alpha(1.0, 1.0) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(next_alpha(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(next_alpha(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(next_alpha(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("next_alpha: fused and sum forms agree to 1e-12") {
  SplitRng rng(17);
  for (int t = 0; t < 2000; ++t) {
    const double L = std::exp(rng.uniform(-3.0, 6.0));
    const double a = std::exp(rng.uniform(-3.0, 8.0));
    const double via_alpha = next_alpha(L, a);
    const double via_sum = next_alpha_from_sum(L, L * a * a);
    CHECK(std::abs(via_alpha - via_sum) <= 1e-12 * std::max(1.0, std::abs(via_alpha)));
    CHECK(via_alpha > a + 0.5 / L - 1e-12);
  }
}

TEST_CASE("schedule identities up to k = 1e4") {
  for (const double L : {0.5, 1.0, 2.0, 3.0, 10.0}) {
    CAPTURE(L);
    const StepSchedule s = StepSchedule::fixed(L, 10000);
    REQUIRE(s.alphas.size() == 10001);
    CHECK(s.alphas[0] == 0.0);
    CHECK(s.A[0] == 0.0);
    CHECK(s.alphas[1] == 1.0 / L);  // alpha_1 = 1/L exactly
    long double partial = 0.0L;
    for (int k = 1; k <= 10000; ++k) {
      const double a = s.alphas[k], A = s.A[k];
      // A_k = L alpha_k^2 (closed-form identity, rounding-level tolerance)
      CHECK(std::abs(A - L * a * a) <= 1e-12 * A);
      // A_k is the partial sum
      partial += a;
      CHECK(std::abs(static_cast<double>(partial) - A) <= 1e-12 * A);
      // growth lemmas, tight only at k = 1 where equality is exact
      CHECK(a >= (k + 1) / (2.0 * L));
      CHECK(A >= (k + 1) * (k + 1) / (4.0 * L));
      CHECK(a > s.alphas[k - 1]);
    }
  }
}

TEST_CASE("run_base: N = 0 returns the start point only") {
  const Problem p = problems::get_smooth("quad_well");
  const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 0, p.lipschitz);
  REQUIRE(t.records.size() == 1);
  CHECK(t.records[0].k == 0);
  CHECK(t.records[0].f_x == p.value(p.x0));
  CHECK(t.status == RunStatus::Completed);
}

TEST_CASE("run_base: 1-D hand trace on f = x^2/2") {
  Eigen::MatrixXd A(1, 1);
  A << 1.0;
  const Problem p = problems::make_quadratic("1d", A, Vector::Zero(1),
                                             FeasibleSet::whole_space(1), Vector::Ones(1));
  std::vector<Vector> xs, us, ys;
  BaseOptions opt;
  opt.observer = [&](int, const Vector& x, const Vector& y, const Vector& u) {
    xs.push_back(x);
    ys.push_back(y);
    us.push_back(u);
  };
  const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 1, 1.0, opt);
  REQUIRE(t.records.size() == 2);
  CHECK(t.records[1].alpha == 1.0);
  CHECK(t.records[1].A == 1.0);
  CHECK(ys[1][0] == 1.0);  // y_1 = u_0 = x_0
  CHECK(us[1][0] == 0.0);  // u_1 = 1 - 1*1
  CHECK(xs[1][0] == 0.0);  // x_1 = (1*0 + 0*1)/1
  CHECK(t.records[1].f_x == 0.0);
}

TEST_CASE("run_base: rate bound 4LR^2/(k+1)^2 on a quadratic, k <= 1000") {
  const Problem p = problems::get_smooth("quad_well");
  const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 1000, p.lipschitz);
  REQUIRE(t.R2.has_value());
  const double L = p.lipschitz, R2 = *t.R2, fs = *p.f_star;
  for (const auto& r : t.records) {
    if (r.k == 0) continue;
    const double kk = r.k + 1.0;
    CHECK(r.f_x - fs <= 4.0 * L * R2 / (kk * kk) + 1e-9);
  }
}

TEST_CASE("run_base: per-step certificate and boundedness") {
  const Problem p = problems::get_smooth("quad_ill");
  std::vector<Vector> xs;
  BaseOptions opt;
  opt.observer = [&](int, const Vector& x, const Vector&, const Vector&) { xs.push_back(x); };
  const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 500, p.lipschitz, opt);
  const double fs = *p.f_star;
  const Vector xstar = *p.x_star;
  const double R2 = *t.R2;
  const double V0 = t.records[0].V_to_opt;
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const auto& prev = t.records[i - 1];
    const auto& cur = t.records[i];
    // A_{k+1} f(x_{k+1}) - A_k f(x_k) + V(x*,u_{k+1}) - V(x*,u_k) <= alpha_{k+1} f(x*)
    const double lhs = cur.A * cur.f_x - prev.A * prev.f_x + cur.V_to_opt - prev.V_to_opt;
    CHECK(lhs <= cur.alpha * fs + 1e-8);
    // the y/x updates are convex combinations: alpha_{k+1} + A_k = A_{k+1}
    CHECK(std::abs(prev.A + cur.alpha - cur.A) <= 1e-12 * std::max(1.0, cur.A));
    // counters are monotone nondecreasing
    CHECK(cur.calls_g >= prev.calls_g);
    CHECK(cur.calls_f >= prev.calls_f);
    // boundedness of the mirror sequence and of the iterates
    CHECK(cur.V_to_opt <= V0 + 1e-8);
    CHECK(0.5 * (xstar - xs[i]).squaredNorm() <= R2 + 1e-8);
  }
}

TEST_CASE("run_base: envelope dominates the gap curve on every suite problem") {
  for (const auto& id : {"quad_well", "quad_ill", "quad_box", "quad_simplex", "lse"}) {
    CAPTURE(id);
    const Problem p = problems::get_smooth(id);
    const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 300, p.lipschitz);
    REQUIRE(t.R2.has_value());
    for (const auto& r : t.records) {
      if (r.k == 0) continue;
      const double env = 4.0 * p.lipschitz * *t.R2 / ((r.k + 1.0) * (r.k + 1.0));
      CHECK(r.f_x - *p.f_star <= env + 1e-9);
    }
  }
}

TEST_CASE("run_base: entropy geometry on the simplex") {
  const Problem p = problems::get_smooth("quad_simplex");
  const Trace t = run_base(p, ProxSetup::entropy_simplex(), p.domain, p.x0, 400, p.lipschitz);
  REQUIRE(t.R2.has_value());
  for (const auto& r : t.records) {
    if (r.k == 0) continue;
    const double env = 4.0 * p.lipschitz * *t.R2 / ((r.k + 1.0) * (r.k + 1.0));
    CHECK(r.f_x - *p.f_star <= env + 1e-9);
  }
}

TEST_CASE("run_base: target-accuracy stopping") {
  const Problem p = problems::get_smooth("quad_well");
  BaseOptions opt;
  opt.target_accuracy = 1e-4;
  const Trace t = run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 100000, p.lipschitz, opt);
  CHECK(t.status == RunStatus::TargetReached);
  const auto& last = t.records.back();
  const double env = 4.0 * p.lipschitz * *t.R2 / ((last.k + 1.0) * (last.k + 1.0));
  CHECK(env <= 1e-4);
  CHECK(last.k < 2000);
  CHECK(last.f_x - *p.f_star <= 1e-4 + 1e-12);
}

TEST_CASE("run_base: argument validation") {
  const Problem p = problems::get_smooth("quad_box");
  CHECK_THROWS_AS(run_base(p, ProxSetup::euclidean(), p.domain, p.x0, 10, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_base(p, ProxSetup::euclidean(), p.domain, p.x0, -1, 1.0),
                  std::invalid_argument);
  Vector outside(2);
  outside << 2.0, 2.0;
  CHECK_THROWS_AS(run_base(p, ProxSetup::euclidean(), p.domain, outside, 10, 1.0),
                  std::invalid_argument);
}
