#include "mtm/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm::problems {

double power_iteration_lmax(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Vector v = Vector::Ones(n);
  for (int i = 0; i < n; ++i) v[i] += 1e-3 * (i + 1);  // break symmetry
  v.normalize();
  double lam = v.dot(A * v);
  for (int it = 0; it < 100000; ++it) {
    Vector w = A * v;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    const double lam_new = v.dot(A * v);
    if (std::abs(lam_new - lam) <= 1e-10 * std::max(std::abs(lam_new), 1e-300) && it > 1)
      return lam_new;
    lam = lam_new;
  }
  return lam;
}

namespace {

// Solve Ax = b and certify the residual.
Vector certified_solve(const Eigen::MatrixXd& A, const Vector& b) {
  Vector x = A.ldlt().solve(b);
  const double res = (A * x - b).norm();
  if (res > 1e-10 * std::max(1.0, b.norm()))
    throw std::runtime_error("certified_solve: residual above 1e-10");
  return x;
}

}  // namespace

Problem make_quadratic(std::string id, const Eigen::MatrixXd& A, const Vector& b,
                       FeasibleSet domain, Vector x0) {
  Problem p;
  p.id = std::move(id);
  p.dim = static_cast<int>(A.rows());
  p.value = [A, b](const Vector& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  p.grad = [A, b](const Vector& x) -> Vector { return A * x - b; };
  p.lipschitz = power_iteration_lmax(A);
  p.domain = std::move(domain);
  p.x0 = std::move(x0);
  if (p.domain.kind() == FeasibleSet::Kind::WholeSpace) {
    p.x_star = certified_solve(A, b);
    p.f_star = -0.5 * b.dot(*p.x_star);
  }
  return p;
}

Problem make_log_sum_exp(std::string id, const Eigen::MatrixXd& rows, double sigma, Vector x0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("log_sum_exp: sigma must be positive");
  Problem p;
  p.id = std::move(id);
  p.dim = static_cast<int>(rows.cols());
  p.value = [rows, sigma](const Vector& x) {
    Vector z = rows * x / sigma;
    const double m = z.maxCoeff();
    return sigma * (m + std::log((z.array() - m).exp().sum()));
  };
  p.grad = [rows, sigma](const Vector& x) -> Vector {
    Vector z = rows * x / sigma;
    const double m = z.maxCoeff();
    Vector w = (z.array() - m).exp();
    w /= w.sum();
    return rows.transpose() * w;
  };
  double lmax = 0.0;
  for (int i = 0; i < rows.rows(); ++i)
    lmax = std::max(lmax, rows.row(i).squaredNorm());
  p.lipschitz = lmax / sigma;
  p.domain = FeasibleSet::whole_space(p.dim);
  p.x0 = std::move(x0);
  return p;
}

MinimaxProblem make_max_of_quadratics(std::string id, std::vector<QuadraticTerm> terms,
                                      FeasibleSet domain, Vector x0) {
  if (terms.empty()) throw std::invalid_argument("max_of_quadratics: needs at least one term");
  MinimaxProblem p;
  p.id = std::move(id);
  p.dim = static_cast<int>(terms.front().A.rows());
  double lmax = 0.0;
  for (auto& t : terms) {
    lmax = std::max(lmax, power_iteration_lmax(t.A));
    const Eigen::MatrixXd A = t.A;
    const Vector b = t.b;
    const double c = t.c;
    p.components.push_back(
        {[A, b, c](const Vector& x) { return 0.5 * x.dot(A * x) - b.dot(x) + c; },
         [A, b](const Vector& x) -> Vector { return A * x - b; }});
  }
  p.lipschitz = lmax;
  p.domain = std::move(domain);
  p.x0 = std::move(x0);
  return p;
}

std::pair<Vector, double> reference_optimum(const Problem& p) {
  if (p.x_star && p.f_star) return {*p.x_star, *p.f_star};
  // High-budget reference run with a certified first-order residual: a
  // projected-gradient fixed point to 1e-10.
  if (!(p.lipschitz > 0.0))
    throw CapabilityError("reference_optimum: problem '" + p.id + "' lacks a usable L");
  const ProxSetup setup = ProxSetup::euclidean();
  Vector x = p.x0;
  const double step = 1.0 / p.lipschitz;
  double residual = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter < 2000000; ++iter) {
    const Vector next = prox_step(setup, p.domain, x, p.grad(x), step);
    residual = (next - x).norm() * p.lipschitz;
    x = next;
    if (residual <= 1e-10 * std::max(1.0, x.norm())) return {x, p.value(x)};
  }
  std::ostringstream os;
  os << "reference_optimum: reference run for '" << p.id
     << "' did not certify residual 1e-10 (reached " << residual << ")";
  throw CapabilityError(os.str());
}

std::pair<Vector, double> reference_optimum(const MinimaxProblem& p) {
  if (p.x_star && p.f_star) return {*p.x_star, *p.f_star};
  throw CapabilityError("reference_optimum: problem '" + p.id +
                        "' carries no analytic optimum and no certified solve is registered");
}

namespace {

Problem build_quad_well() {
  Eigen::MatrixXd A = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  Vector b = Eigen::Vector2d(1.0, 2.0);
  return make_quadratic("quad_well", A, b, FeasibleSet::whole_space(2),
                        Eigen::Vector2d(0.0, 0.0));
}

Problem build_quad_ill() {
  Eigen::MatrixXd A = Eigen::Vector3d(1.0, 10.0, 100.0).asDiagonal();
  Vector b = Eigen::Vector3d(1.0, 10.0, 100.0);
  return make_quadratic("quad_ill", A, b, FeasibleSet::whole_space(3),
                        Eigen::Vector3d(0.0, 0.0, 0.0));
}

Problem build_quad_box() {
  // Diagonal curvature makes the box-constrained optimum separable:
  // x*_i = clip(b_i / A_ii).
  Eigen::MatrixXd A = Eigen::Vector2d(2.0, 1.0).asDiagonal();
  Vector b = Eigen::Vector2d(3.0, 0.25);
  FeasibleSet box = FeasibleSet::box(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0));
  Problem p = make_quadratic("quad_box", A, b, box, Eigen::Vector2d(0.0, 0.0));
  Vector xs(2);
  for (int i = 0; i < 2; ++i)
    xs[i] = std::min(std::max(b[i] / A(i, i), box.lower()[i]), box.upper()[i]);
  p.x_star = xs;
  p.f_star = p.value(xs);
  return p;
}

Problem build_quad_simplex() {
  // f(x) = 1/2 |x - p|^2 with p inside the simplex, so x* = p and f* = 0.
  const Vector target = Eigen::Vector3d(0.2, 0.3, 0.5);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  Problem p = make_quadratic("quad_simplex", A, target, FeasibleSet::simplex(3),
                             Vector::Constant(3, 1.0 / 3.0));
  const double shift = 0.5 * target.squaredNorm();
  auto base_value = p.value;
  p.value = [base_value, shift](const Vector& x) { return base_value(x) + shift; };
  p.x_star = target;
  p.f_star = 0.0;
  return p;
}

Problem build_lse() {
  Eigen::MatrixXd rows(4, 2);
  rows << 1, 0, -1, 0, 0, 1, 0, -1;
  Problem p = make_log_sum_exp("lse", rows, 1.0, Eigen::Vector2d(1.0, 1.0));
  // By symmetry of the +-e_i rows the optimum sits at the origin.
  p.x_star = Eigen::Vector2d(0.0, 0.0);
  p.f_star = std::log(4.0);
  return p;
}

MinimaxProblem build_maxq_sym() {
  // max{ (x-1)^2, (x+1)^2 } on the line: x* = 0, f* = 1.
  Eigen::MatrixXd A(1, 1);
  A << 2.0;
  std::vector<QuadraticTerm> terms;
  terms.push_back({A, Vector::Constant(1, 2.0), 1.0});
  terms.push_back({A, Vector::Constant(1, -2.0), 1.0});
  MinimaxProblem p = make_max_of_quadratics("maxq_sym", std::move(terms),
                                            FeasibleSet::whole_space(1),
                                            Vector::Constant(1, 0.75));
  p.x_star = Vector::Zero(1);
  p.f_star = 1.0;
  return p;
}

MinimaxProblem build_maxq_2d() {
  // max_j 1/2 |x - c_j|^2 with mirrored centers: x* = 0, f* = 1/2 |c|^2.
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  std::vector<QuadraticTerm> terms;
  terms.push_back({I, Eigen::Vector2d(1.0, 0.0), 0.5});
  terms.push_back({I, Eigen::Vector2d(-1.0, 0.0), 0.5});
  MinimaxProblem p = make_max_of_quadratics("maxq_2d", std::move(terms),
                                            FeasibleSet::whole_space(2),
                                            Eigen::Vector2d(0.5, 0.8));
  p.x_star = Eigen::Vector2d(0.0, 0.0);
  p.f_star = 0.5;
  return p;
}

}  // namespace

const std::vector<std::string>& smooth_ids() {
  static const std::vector<std::string> ids = {"quad_well", "quad_ill", "quad_box",
                                               "quad_simplex", "lse"};
  return ids;
}

const std::vector<std::string>& minimax_ids() {
  static const std::vector<std::string> ids = {"maxq_sym", "maxq_2d"};
  return ids;
}

bool is_smooth(const std::string& id) {
  for (const auto& s : smooth_ids())
    if (s == id) return true;
  return false;
}

bool is_minimax(const std::string& id) {
  for (const auto& s : minimax_ids())
    if (s == id) return true;
  return false;
}

Problem get_smooth(const std::string& id) {
  if (id == "quad_well") return build_quad_well();
  if (id == "quad_ill") return build_quad_ill();
  if (id == "quad_box") return build_quad_box();
  if (id == "quad_simplex") return build_quad_simplex();
  if (id == "lse") return build_lse();
  throw CapabilityError("unknown problem id '" + id + "'");
}

MinimaxProblem get_minimax(const std::string& id) {
  if (id == "maxq_sym") return build_maxq_sym();
  if (id == "maxq_2d") return build_maxq_2d();
  throw CapabilityError("unknown problem id '" + id + "'");
}

}  // namespace mtm::problems
