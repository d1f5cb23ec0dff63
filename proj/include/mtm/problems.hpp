#ifndef MTM_PROBLEMS_HPP
#define MTM_PROBLEMS_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "mtm/problem.hpp"

namespace mtm::problems {

/// Largest eigenvalue of a symmetric PSD matrix by power iteration,
/// converged to 1e-10 relative.
double power_iteration_lmax(const Eigen::MatrixXd& A);

/// f(x) = 1/2 x'Ax - b'x with A symmetric PSD; L = lambda_max(A).
Problem make_quadratic(std::string id, const Eigen::MatrixXd& A, const Vector& b,
                       FeasibleSet domain, Vector x0);

/// f(x) = sigma ln sum_i exp(<a_i, x>/sigma); L = max_i |a_i|^2 / sigma.
Problem make_log_sum_exp(std::string id, const Eigen::MatrixXd& rows, double sigma, Vector x0);

struct QuadraticTerm {
  Eigen::MatrixXd A;
  Vector b;
  double c = 0.0;
};

/// max_j ( 1/2 x'A_j x - b_j'x + c_j ); L = max_j lambda_max(A_j).
MinimaxProblem make_max_of_quadratics(std::string id, std::vector<QuadraticTerm> terms,
                                      FeasibleSet domain, Vector x0);

/// Analytic optimum where available, otherwise a certified linear solve
/// (residual <= 1e-10).  Unsupported problems raise CapabilityError.
std::pair<Vector, double> reference_optimum(const Problem& p);
std::pair<Vector, double> reference_optimum(const MinimaxProblem& p);

/// The registered desk-scale suite.
const std::vector<std::string>& smooth_ids();
const std::vector<std::string>& minimax_ids();
bool is_smooth(const std::string& id);
bool is_minimax(const std::string& id);
Problem get_smooth(const std::string& id);
MinimaxProblem get_minimax(const std::string& id);

}  // namespace mtm::problems

#endif  // MTM_PROBLEMS_HPP
