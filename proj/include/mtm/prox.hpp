#ifndef MTM_PROX_HPP
#define MTM_PROX_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace mtm {

using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Prox geometry
// ---------------------------------------------------------------------------

enum class ProxKind { Euclidean, EntropySimplex, ScaledEuclideanL };

std::string to_string(ProxKind kind);

/// A prox-function d, its Bregman divergence V, and the norm pair it is
/// 1-strongly convex against.
///
///   euclidean          d(x) = 1/2 |x|_2^2,      norm = |.|_2
///   entropy_simplex    d(x) = sum x_i ln x_i,   norm = |.|_1  (on the simplex)
///   scaled_euclidean_L d(x) = L/2 |x|_2^2,      norm = sqrt(L) |.|_2
class ProxSetup {
 public:
  static ProxSetup euclidean();
  static ProxSetup entropy_simplex();
  static ProxSetup scaled_euclidean(double scale_L);

  ProxKind kind() const { return kind_; }
  double scale() const { return scale_; }

  double d(const Vector& x) const;
  Vector grad_d(const Vector& x) const;
  double norm(const Vector& v) const;
  double dual_norm(const Vector& v) const;

  /// V(x, y) = d(x) - d(y) - <grad d(y), x - y>.
  /// Entropy setups require strictly positive y (domain error otherwise).
  double bregman(const Vector& x, const Vector& y) const;

 private:
  ProxSetup(ProxKind kind, double scale) : kind_(kind), scale_(scale) {}

  ProxKind kind_;
  double scale_;  // L of the scaled-euclidean norm; 1 otherwise
};

// ---------------------------------------------------------------------------
// Feasible sets
// ---------------------------------------------------------------------------

class FeasibleSet {
 public:
  enum class Kind { WholeSpace, Box, Simplex, Ball };

  static FeasibleSet whole_space(int dim);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet simplex(int dim);
  static FeasibleSet ball(Vector center, double radius);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  bool contains(const Vector& x, double tol = 1e-9) const;
  bool bounded() const { return kind_ != Kind::WholeSpace; }
  /// Euclidean diameter; +inf for the whole space.
  double diameter() const;
  std::string name() const;

 private:
  FeasibleSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Vector lower_, upper_;   // box
  Vector center_;          // ball
  double radius_ = 0.0;    // ball
};

/// Euclidean projection onto the probability simplex (sort-based exact method).
Vector project_simplex(const Vector& v);

// ---------------------------------------------------------------------------
// Composite term h
// ---------------------------------------------------------------------------

/// The composite part handled inside the prox subproblem.  Restricted to
/// terms with a closed-form resolvent: zero, affine <c, x> + b, and a
/// separable weighted l1 (euclidean geometry only).
class Composite {
 public:
  enum class Kind { Zero, Affine, ScaledL1 };

  static Composite zero();
  static Composite affine(Vector c, double b = 0.0);
  static Composite scaled_l1(double weight);

  Kind kind() const { return kind_; }
  const Vector& linear() const { return c_; }
  double offset() const { return b_; }
  double l1_weight() const { return weight_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  double value(const Vector& x) const;

 private:
  explicit Composite(Kind kind) : kind_(kind) {}

  Kind kind_;
  Vector c_;
  double b_ = 0.0;
  double weight_ = 0.0;
};

// ---------------------------------------------------------------------------
// Max-of-linearizations model
// ---------------------------------------------------------------------------

/// The model max_j [ f_j(y) + <grad f_j(y), x - y> ] anchored at y.
struct LinearModel {
  Vector anchor;                  // y
  std::vector<double> values;     // f_j(y)
  std::vector<Vector> gradients;  // grad f_j(y)

  int count() const { return static_cast<int>(values.size()); }
  /// max_j [ values[j] + <gradients[j], x - anchor> ]
  double value(const Vector& x) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Subproblem solvers
// ---------------------------------------------------------------------------

/// V(x, y); thin free-function form of ProxSetup::bregman.
double bregman(const ProxSetup& setup, const Vector& x, const Vector& y);

/// argmin_{x in Q}  V(x, u) + alpha * ( <g, x> + h(x) ).
///
/// Supported (setup, Q) pairs: euclidean x {whole_space, box, ball, simplex},
/// entropy x {simplex}, scaled_euclidean_L x {whole_space}.  Anything else
/// raises CapabilityError.
Vector prox_step(const ProxSetup& setup, const FeasibleSet& Q, const Vector& u,
                 const Vector& g, double alpha, const Composite& h = Composite::zero());

struct MinimaxProxOptions {
  int max_iterations = 10000;
  double gap_tolerance = 1e-10;
};

struct MinimaxProxResult {
  Vector x;
  Vector lambda;    // optimal simplex weights of the dual
  double gap;       // final primal-dual gap
  int iterations;
};

/// argmin_{x in Q}  V(x, u) + alpha * ( max_j [v_j + <g_j, x - y>] + h(x) ).
///
/// Solved through the M-dimensional concave dual over the simplex; each dual
/// evaluation is one prox_step.  Non-convergence within the iteration cap
/// raises SubproblemError carrying the best iterate and the residual gap.
Vector minimax_prox_step(const ProxSetup& setup, const FeasibleSet& Q, const Vector& u,
                         const LinearModel& model, double alpha,
                         const Composite& h = Composite::zero(),
                         const MinimaxProxOptions& options = {});

MinimaxProxResult minimax_prox_step_full(const ProxSetup& setup, const FeasibleSet& Q,
                                         const Vector& u, const LinearModel& model,
                                         double alpha, const Composite& h = Composite::zero(),
                                         const MinimaxProxOptions& options = {});

}  // namespace mtm

#endif  // MTM_PROX_HPP
