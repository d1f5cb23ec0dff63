#ifndef MTM_ERRORS_HPP
#define MTM_ERRORS_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace mtm {

/// Requested (prox, feasible set, composite) combination is not implemented.
/// The message lists the supported matrix.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// An inner subproblem solver stopped before reaching its tolerance.
/// Carries the best iterate found and the remaining duality-gap residual.
class SubproblemError : public std::runtime_error {
 public:
  SubproblemError(const std::string& what, Eigen::VectorXd best, double residual)
      : std::runtime_error(what), best_iterate(std::move(best)), residual(residual) {}

  Eigen::VectorXd best_iterate;
  double residual;
};

/// Backtracking exceeded the divergence guard (local constant grew past
/// 2^60 * L0), which signals a non-Lipschitz-gradient input.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double l_last, int iteration)
      : std::runtime_error(what), last_constant(l_last), iteration(iteration) {}

  double last_constant;
  int iteration;
};

}  // namespace mtm

#endif  // MTM_ERRORS_HPP
