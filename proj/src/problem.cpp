#include "mtm/problem.hpp"

#include <limits>

namespace mtm {

double MinimaxProblem::smooth_max(const Vector& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : components) best = std::max(best, c.value(x));
  return best;
}

double MinimaxProblem::value(const Vector& x) const { return smooth_max(x) + h.value(x); }

LinearModel MinimaxProblem::model_at(const Vector& y) const {
  LinearModel m;
  m.anchor = y;
  m.values.reserve(components.size());
  m.gradients.reserve(components.size());
  for (const auto& c : components) {
    m.values.push_back(c.value(y));
    m.gradients.push_back(c.grad(y));
  }
  return m;
}

MinimaxProblem as_minimax(const Problem& p, Composite h) {
  MinimaxProblem m;
  m.id = p.id;
  m.dim = p.dim;
  m.components.push_back({p.value, p.grad});
  m.h = std::move(h);
  m.lipschitz = p.lipschitz;
  m.domain = p.domain;
  m.x0 = p.x0;
  m.x_star = p.x_star;
  m.f_star = p.f_star;
  return m;
}

}  // namespace mtm
