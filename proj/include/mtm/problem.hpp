#ifndef MTM_PROBLEM_HPP
#define MTM_PROBLEM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtm/prox.hpp"

namespace mtm {

/// Observer hook for tests and diagnostics; solvers call it once per
/// recorded step.
using RunObserver = std::function<void(int k, const Vector& x, const Vector& y, const Vector& u)>;

/// A smooth convex objective with an L-Lipschitz gradient, plus the metadata
/// the benchmark needs (certified L, optional analytic optimum, canonical
/// start and feasible set).
struct Problem {
  std::string id;
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
  double lipschitz = 0.0;

  FeasibleSet domain = FeasibleSet::whole_space(1);
  Vector x0;
  std::optional<Vector> x_star;
  std::optional<double> f_star;

  double operator()(const Vector& x) const { return value(x); }
};

/// One smooth component of a minimax objective.
struct Component {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
};

/// f(x) = max_j f_j(x) + h(x) with convex L-smooth components.
struct MinimaxProblem {
  std::string id;
  int dim = 0;
  std::vector<Component> components;
  Composite h = Composite::zero();
  double lipschitz = 0.0;  // true max_j L_j, for verification only

  FeasibleSet domain = FeasibleSet::whole_space(1);
  Vector x0;
  std::optional<Vector> x_star;
  std::optional<double> f_star;

  int count() const { return static_cast<int>(components.size()); }

  /// max_j f_j(x) + h(x)
  double value(const Vector& x) const;
  /// All M values and gradients at y, as one model evaluation.
  LinearModel model_at(const Vector& y) const;
  /// max_j f_j(x), without the composite part.
  double smooth_max(const Vector& x) const;
};

/// View a smooth problem as a single-component minimax problem.
MinimaxProblem as_minimax(const Problem& p, Composite h = Composite::zero());

}  // namespace mtm

#endif  // MTM_PROBLEM_HPP
