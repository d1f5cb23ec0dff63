#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mtm/errors.hpp"
#include "mtm/problems.hpp"
#include "test_util.hpp"

using namespace mtm;
using test::randn;
using test::random_point_in;

namespace {

Vector central_difference(const Problem& p, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector e = Vector::Zero(x.size());
    e[i] = h;
    g[i] = (p.value(x + e) - p.value(x - e)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("reference optima") {
  SUBCASE("trivial quadratic") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    const Problem p =
        problems::make_quadratic("t", I, Vector::Zero(2), FeasibleSet::whole_space(2),
                                 Vector::Ones(2));
    const auto [xs, fs] = problems::reference_optimum(p);
    CHECK(xs.norm() == 0.0);
    CHECK(fs == 0.0);
  }
  SUBCASE("diagonal quadratic by linear solve") {
    Eigen::MatrixXd A = Eigen::Vector2d(1.0, 10.0).asDiagonal();
    const Problem p = problems::make_quadratic(
        "t", A, Eigen::Vector2d(1.0, 10.0), FeasibleSet::whole_space(2), Vector::Zero(2));
    const auto [xs, fs] = problems::reference_optimum(p);
    CHECK(xs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(xs[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fs == doctest::Approx(-5.5).epsilon(1e-12));
  }
  SUBCASE("max of mirrored parabolas, against a grid") {
    const MinimaxProblem p = problems::get_minimax("maxq_sym");
    const auto [xs, fs] = problems::reference_optimum(p);
    CHECK(xs[0] == doctest::Approx(0.0));
    CHECK(fs == doctest::Approx(1.0));
    double best = std::numeric_limits<double>::infinity();
    for (int i = -2000; i <= 2000; ++i) {
      Vector x(1);
      x[0] = i / 1000.0;
      best = std::min(best, p.value(x));
    }
    CHECK(std::abs(best - fs) <= 1e-5);
  }
  SUBCASE("high-budget fallback certifies a constrained optimum") {
    Eigen::MatrixXd A = Eigen::Vector2d(2.0, 1.0).asDiagonal();
    Problem p = problems::make_quadratic(
        "t", A, Eigen::Vector2d(3.0, 0.25),
        FeasibleSet::box(Vector::Zero(2), Vector::Ones(2)), Vector::Zero(2));
    REQUIRE(!p.x_star.has_value());
    const auto [xs, fs] = problems::reference_optimum(p);
    CHECK(xs[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(xs[1] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(fs == doctest::Approx(-2.03125).epsilon(1e-10));
  }
}

TEST_CASE("suite gradients match central finite differences") {
  SplitRng rng(31337);
  for (const auto& id : problems::smooth_ids()) {
    CAPTURE(id);
    const Problem p = problems::get_smooth(id);
    for (int t = 0; t < 100; ++t) {
      const Vector x = random_point_in(rng, p.domain);
      const Vector g = p.grad(x);
      const Vector fd = central_difference(p, x);
      const double rel = (g - fd).norm() / std::max(1.0, g.norm());
      CHECK(rel <= 1e-5);
    }
  }
  for (const auto& id : problems::minimax_ids()) {
    CAPTURE(id);
    const MinimaxProblem p = problems::get_minimax(id);
    for (const auto& comp : p.components) {
      for (int t = 0; t < 25; ++t) {
        const Vector x = randn(rng, p.dim, 2.0);
        Vector fd(p.dim);
        for (int i = 0; i < p.dim; ++i) {
          Vector e = Vector::Zero(p.dim);
          e[i] = 1e-6;
          fd[i] = (comp.value(x + e) - comp.value(x - e)) / 2e-6;
        }
        CHECK((comp.grad(x) - fd).norm() / std::max(1.0, comp.grad(x).norm()) <= 1e-5);
      }
    }
  }
}

TEST_CASE("certified L satisfies the descent inequality on random pairs") {
  SplitRng rng(8);
  for (const auto& id : problems::smooth_ids()) {
    CAPTURE(id);
    const Problem p = problems::get_smooth(id);
    for (int t = 0; t < 10000; ++t) {
      const Vector x = random_point_in(rng, p.domain);
      const Vector y = random_point_in(rng, p.domain);
      const double lin = p.value(y) + p.grad(y).dot(x - y);
      const double quad = 0.5 * p.lipschitz * (x - y).squaredNorm();
      CHECK(p.value(x) <= lin + quad + 1e-9);
      CHECK(p.value(x) >= lin - 1e-9);  // convexity
    }
  }
}

TEST_CASE("power iteration certifies diagonal and dense spectra") {
  Eigen::MatrixXd A = Eigen::Vector3d(1.0, 10.0, 100.0).asDiagonal();
  CHECK(problems::power_iteration_lmax(A) == doctest::Approx(100.0).epsilon(1e-10));
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  CHECK(problems::power_iteration_lmax(I) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::MatrixXd R(2, 2);
  R << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1 and 3
  CHECK(problems::power_iteration_lmax(R) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("reference_optimum: unsupported problems raise a capability error") {
  Problem p;
  p.id = "opaque";
  p.dim = 1;
  p.value = [](const Vector& x) { return x[0] * x[0]; };
  p.grad = [](const Vector& x) -> Vector { return 2.0 * x; };
  p.lipschitz = 0.0;  // no usable constant, no stamped optimum
  p.domain = FeasibleSet::whole_space(1);
  p.x0 = Vector::Ones(1);
  CHECK_THROWS_AS(problems::reference_optimum(p), CapabilityError);
}

TEST_CASE("registry rejects unknown ids") {
  CHECK_THROWS_AS(problems::get_smooth("nope"), CapabilityError);
  CHECK_THROWS_AS(problems::get_minimax("nope"), CapabilityError);
  CHECK(problems::is_smooth("quad_well"));
  CHECK(problems::is_minimax("maxq_2d"));
  CHECK(!problems::is_smooth("maxq_2d"));
}

TEST_CASE("log-sum-exp analytic values") {
  const Problem p = problems::get_smooth("lse");
  CHECK(p.value(Vector::Zero(2)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(p.grad(Vector::Zero(2)).norm() <= 1e-14);
  CHECK(p.lipschitz == doctest::Approx(1.0));
}
