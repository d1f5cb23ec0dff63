#include "mtm/prox.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mtm/errors.hpp"

namespace mtm {

namespace {

constexpr double kEntropyFloor = 1e-300;  // clamp before logarithms

[[noreturn]] void capability_error(const std::string& detail) {
  throw CapabilityError(
      detail +
      "; supported combinations: euclidean x {whole_space, box, ball, simplex}, "
      "entropy_simplex x {simplex}, scaled_euclidean_L x {whole_space}; "
      "composite h: zero or affine everywhere, scaled_l1 with euclidean "
      "whole_space/box only");
}

void check_dim(const Vector& v, int dim, const char* what) {
  if (v.size() != dim) {
    std::ostringstream os;
    os << what << " has dimension " << v.size() << ", expected " << dim;
    throw std::invalid_argument(os.str());
  }
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProxSetup
// ---------------------------------------------------------------------------

std::string to_string(ProxKind kind) {
  switch (kind) {
    case ProxKind::Euclidean: return "euclidean";
    case ProxKind::EntropySimplex: return "entropy_simplex";
    case ProxKind::ScaledEuclideanL: return "scaled_euclidean_L";
  }
  return "?";
}

ProxSetup ProxSetup::euclidean() { return ProxSetup(ProxKind::Euclidean, 1.0); }

ProxSetup ProxSetup::entropy_simplex() { return ProxSetup(ProxKind::EntropySimplex, 1.0); }

ProxSetup ProxSetup::scaled_euclidean(double scale_L) {
  if (!(scale_L > 0.0)) throw std::invalid_argument("scaled_euclidean: scale must be positive");
  return ProxSetup(ProxKind::ScaledEuclideanL, scale_L);
}

double ProxSetup::d(const Vector& x) const {
  switch (kind_) {
    case ProxKind::Euclidean:
      return 0.5 * x.squaredNorm();
    case ProxKind::ScaledEuclideanL:
      return 0.5 * scale_ * x.squaredNorm();
    case ProxKind::EntropySimplex: {
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi < 0.0) throw std::domain_error("entropy prox-function needs x >= 0");
        if (xi > 0.0) s += xi * std::log(xi);
      }
      return s;
    }
  }
  return 0.0;
}

Vector ProxSetup::grad_d(const Vector& x) const {
  switch (kind_) {
    case ProxKind::Euclidean:
      return x;
    case ProxKind::ScaledEuclideanL:
      return scale_ * x;
    case ProxKind::EntropySimplex: {
      Vector g(x.size());
      for (int i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw std::domain_error("entropy grad needs strictly positive x");
        g[i] = std::log(x[i]) + 1.0;
      }
      return g;
    }
  }
  return x;
}

double ProxSetup::norm(const Vector& v) const {
  switch (kind_) {
    case ProxKind::Euclidean: return v.norm();
    case ProxKind::ScaledEuclideanL: return std::sqrt(scale_) * v.norm();
    case ProxKind::EntropySimplex: return v.lpNorm<1>();
  }
  return v.norm();
}

double ProxSetup::dual_norm(const Vector& v) const {
  switch (kind_) {
    case ProxKind::Euclidean: return v.norm();
    case ProxKind::ScaledEuclideanL: return v.norm() / std::sqrt(scale_);
    case ProxKind::EntropySimplex: return v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

double ProxSetup::bregman(const Vector& x, const Vector& y) const {
  if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
  switch (kind_) {
    case ProxKind::Euclidean:
      return 0.5 * (x - y).squaredNorm();
    case ProxKind::ScaledEuclideanL:
      return 0.5 * scale_ * (x - y).squaredNorm();
    case ProxKind::EntropySimplex: {
      // d(x) - d(y) - <ln y + 1, x - y>, with the 0 ln 0 = 0 convention.
      double v = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::domain_error("bregman: entropy needs strictly positive y");
        if (x[i] < 0.0) throw std::domain_error("bregman: entropy needs x >= 0");
        if (x[i] > 0.0) v += x[i] * (std::log(x[i]) - std::log(y[i]));
        v += y[i] - x[i];
      }
      return v;
    }
  }
  return 0.0;
}

double bregman(const ProxSetup& setup, const Vector& x, const Vector& y) {
  return setup.bregman(x, y);
}

// ---------------------------------------------------------------------------
// FeasibleSet
// ---------------------------------------------------------------------------

FeasibleSet FeasibleSet::whole_space(int dim) {
  if (dim < 1) throw std::invalid_argument("feasible set: dimension must be >= 1");
  return FeasibleSet(Kind::WholeSpace, dim);
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("box: bounds must be nonempty and equally sized");
  if ((lower.array() > upper.array()).any())
    throw std::invalid_argument("box: lower bound exceeds upper bound");
  FeasibleSet q(Kind::Box, static_cast<int>(lower.size()));
  q.lower_ = std::move(lower);
  q.upper_ = std::move(upper);
  return q;
}

FeasibleSet FeasibleSet::simplex(int dim) {
  if (dim < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
  return FeasibleSet(Kind::Simplex, dim);
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  FeasibleSet q(Kind::Ball, static_cast<int>(center.size()));
  q.center_ = std::move(center);
  q.radius_ = radius;
  return q;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::WholeSpace:
      return true;
    case Kind::Box:
      return (x.array() >= lower_.array() - tol).all() &&
             (x.array() <= upper_.array() + tol).all();
    case Kind::Simplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
    case Kind::Ball:
      return (x - center_).norm() <= radius_ + tol;
  }
  return false;
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case Kind::WholeSpace: return std::numeric_limits<double>::infinity();
    case Kind::Box: return (upper_ - lower_).norm();
    case Kind::Simplex: return std::sqrt(2.0);
    case Kind::Ball: return 2.0 * radius_;
  }
  return std::numeric_limits<double>::infinity();
}

std::string FeasibleSet::name() const {
  switch (kind_) {
    case Kind::WholeSpace: return "whole_space";
    case Kind::Box: return "box";
    case Kind::Simplex: return "simplex";
    case Kind::Ball: return "ball";
  }
  return "?";
}

Vector project_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> w(v.data(), v.data() + n);
  std::sort(w.begin(), w.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  for (int j = 0; j < n; ++j) {
    css += w[j];
    const double t = (1.0 - css) / (j + 1);
    if (w[j] + t > 0.0) theta = t;
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = std::max(v[i] + theta, 0.0);
  return x;
}

// ---------------------------------------------------------------------------
// Composite
// ---------------------------------------------------------------------------

Composite Composite::zero() { return Composite(Kind::Zero); }

Composite Composite::affine(Vector c, double b) {
  Composite h(Kind::Affine);
  h.c_ = std::move(c);
  h.b_ = b;
  return h;
}

Composite Composite::scaled_l1(double weight) {
  if (weight < 0.0) throw std::invalid_argument("scaled_l1: weight must be >= 0");
  Composite h(Kind::ScaledL1);
  h.weight_ = weight;
  return h;
}

double Composite::value(const Vector& x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Affine: return c_.dot(x) + b_;
    case Kind::ScaledL1: return weight_ * x.lpNorm<1>();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// LinearModel
// ---------------------------------------------------------------------------

double LinearModel::value(const Vector& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j)
    best = std::max(best, values[j] + gradients[j].dot(x - anchor));
  return best;
}

void LinearModel::validate() const {
  if (values.empty() || values.size() != gradients.size())
    throw std::invalid_argument("LinearModel: needs M >= 1 values with matching gradients");
  for (const auto& g : gradients)
    if (g.size() != anchor.size())
      throw std::invalid_argument("LinearModel: gradient dimension mismatch");
}

// ---------------------------------------------------------------------------
// prox_step
// ---------------------------------------------------------------------------

namespace {

// Effective linear term: alpha * (g + c) for affine h; h's constant part
// never moves the argmin.
Vector effective_gradient(const Vector& g, const Composite& h) {
  if (h.kind() == Composite::Kind::Affine) return g + h.linear();
  return g;
}

Vector prox_euclidean(const FeasibleSet& Q, const Vector& u, const Vector& g,
                      double alpha, const Composite& h) {
  const Vector p = u - alpha * effective_gradient(g, h);
  const bool l1 = h.kind() == Composite::Kind::ScaledL1;
  const double t = l1 ? alpha * h.l1_weight() : 0.0;

  switch (Q.kind()) {
    case FeasibleSet::Kind::WholeSpace: {
      if (!l1) return p;
      Vector x(p.size());
      for (int i = 0; i < p.size(); ++i) x[i] = soft_threshold(p[i], t);
      return x;
    }
    case FeasibleSet::Kind::Box: {
      Vector x(p.size());
      for (int i = 0; i < p.size(); ++i) {
        const double s = l1 ? soft_threshold(p[i], t) : p[i];
        x[i] = std::min(std::max(s, Q.lower()[i]), Q.upper()[i]);
      }
      return x;
    }
    case FeasibleSet::Kind::Ball: {
      if (l1) capability_error("scaled_l1 composite with ball constraint");
      const Vector r = p - Q.center();
      const double nr = r.norm();
      if (nr <= Q.radius()) return p;
      return Q.center() + (Q.radius() / nr) * r;
    }
    case FeasibleSet::Kind::Simplex: {
      if (l1) capability_error("scaled_l1 composite with simplex constraint");
      return project_simplex(p);
    }
  }
  capability_error("unknown feasible set");
}

// Multiplicative-weights update in the log domain.
Vector prox_entropy_simplex(const Vector& u, const Vector& g, double alpha,
                            const Composite& h) {
  if (h.kind() == Composite::Kind::ScaledL1)
    capability_error("scaled_l1 composite with entropy prox");
  const Vector ge = effective_gradient(g, h);
  const int n = static_cast<int>(u.size());
  Vector w(n);
  for (int i = 0; i < n; ++i)
    w[i] = std::log(std::max(u[i], kEntropyFloor)) - alpha * ge[i];
  const double m = w.maxCoeff();
  Vector x = (w.array() - m).exp();
  return x / x.sum();
}

}  // namespace

Vector prox_step(const ProxSetup& setup, const FeasibleSet& Q, const Vector& u,
                 const Vector& g, double alpha, const Composite& h) {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_step: alpha must be positive");
  check_dim(u, Q.dimension(), "u");
  check_dim(g, Q.dimension(), "g");

  switch (setup.kind()) {
    case ProxKind::Euclidean:
      return prox_euclidean(Q, u, g, alpha, h);
    case ProxKind::EntropySimplex:
      if (Q.kind() != FeasibleSet::Kind::Simplex)
        capability_error("entropy_simplex prox with " + Q.name() + " constraint");
      return prox_entropy_simplex(u, g, alpha, h);
    case ProxKind::ScaledEuclideanL:
      if (Q.kind() != FeasibleSet::Kind::WholeSpace)
        capability_error("scaled_euclidean_L prox with " + Q.name() + " constraint");
      if (h.kind() == Composite::Kind::ScaledL1)
        capability_error("scaled_l1 composite with scaled_euclidean_L prox");
      // argmin L/2 |x-u|^2 + alpha <g_eff, x>  =  u - (alpha/L) g_eff
      return u - (alpha / setup.scale()) * effective_gradient(g, h);
  }
  capability_error("unknown prox kind");
}

// ---------------------------------------------------------------------------
// minimax_prox_step: concave dual over the simplex, solved by accelerated
// projected gradient ascent with adaptive restart.
// ---------------------------------------------------------------------------

MinimaxProxResult minimax_prox_step_full(const ProxSetup& setup, const FeasibleSet& Q,
                                         const Vector& u, const LinearModel& model,
                                         double alpha, const Composite& h,
                                         const MinimaxProxOptions& options) {
  if (!(alpha > 0.0)) throw std::invalid_argument("minimax_prox_step: alpha must be positive");
  model.validate();
  const int M = model.count();

  if (M == 1) {
    MinimaxProxResult res;
    res.x = prox_step(setup, Q, u, model.gradients[0], alpha, h);
    res.lambda = Vector::Ones(1);
    res.gap = 0.0;
    res.iterations = 0;
    return res;
  }

  // Dual objective D(lam) = min_x V(x,u) + alpha (lam' l(x) + h(x)) with
  // l_j(x) = v_j + <g_j, x - y>.  x*(lam) is one prox_step; by Danskin
  // grad D = alpha * l(x*(lam)), and the primal-dual gap at x = x*(lam) is
  // alpha (max_j l_j(x) - lam' l(x)).
  Eigen::MatrixXd G(M, u.size());
  for (int j = 0; j < M; ++j) G.row(j) = model.gradients[j].transpose();
  Vector v(M);
  for (int j = 0; j < M; ++j) v[j] = model.values[j];

  // The gap target is read against the subproblem's own scale: once
  // alpha (1 + |l|) passes 1, an absolute 1e-10 certificate sits below the
  // double-precision noise floor of the gap formula while the downstream
  // certificates only consume gap / A_{k+1}.
  const auto effective_tol = [&](const Vector& ell) {
    return options.gap_tolerance *
           std::max(1.0, alpha * (1.0 + ell.lpNorm<Eigen::Infinity>()));
  };

  if (M == 2) {
    // Scalar dual: lam = (s, 1-s) with D'(s) = alpha (l_1 - l_2)(x*(s))
    // nonincreasing, so bisection pins the maximizer to machine precision.
    auto x_of = [&](double s) {
      return prox_step(setup, Q, u, s * model.gradients[0] + (1.0 - s) * model.gradients[1],
                       alpha, h);
    };
    auto slope = [&](const Vector& x) {
      return (v[0] + model.gradients[0].dot(x - model.anchor)) -
             (v[1] + model.gradients[1].dot(x - model.anchor));
    };
    double lo = 0.0, hi = 1.0;
    Vector x_lo = x_of(lo), x_hi = x_of(hi);
    double s = 0.0;
    Vector x;
    if (slope(x_hi) >= 0.0) {
      s = 1.0;
      x = std::move(x_hi);
    } else if (slope(x_lo) <= 0.0) {
      s = 0.0;
      x = std::move(x_lo);
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(x_of(mid)) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      s = 0.5 * (lo + hi);
      x = x_of(s);
    }
    Vector lam(2);
    lam << s, 1.0 - s;
    const Vector ell = v + G * (x - model.anchor);
    MinimaxProxResult res;
    res.gap = alpha * (ell.maxCoeff() - lam.dot(ell));
    // u competes under the weak-duality certificate P(u) - Phi(x*(lam); lam):
    // at a frozen fixed point the dual parametrization cannot represent lam*
    // exactly while u is already the exact minimizer.
    const double dual_value =
        setup.bregman(x, u) + alpha * (lam.dot(ell) + h.value(x));
    const double gap_u = alpha * (model.value(u) + h.value(u)) - dual_value;
    res.x = std::move(x);
    if (gap_u < res.gap) {
      res.gap = std::max(gap_u, 0.0);
      res.x = u;
    }
    res.lambda = std::move(lam);
    res.iterations = 0;
    if (res.gap > effective_tol(ell)) {
      std::ostringstream os;
      os << "minimax_prox_step: bisection residual " << res.gap << " above tolerance "
         << effective_tol(ell);
      throw SubproblemError(os.str(), res.x, res.gap);
    }
    return res;
  }

  // grad D is alpha^2 lam_max(G G') Lipschitz (strong convexity of V is 1;
  // the scaled setup is 1/scale-smooth in the dual, which only helps).
  Eigen::MatrixXd K = G * G.transpose();
  double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().maxCoeff();
  if (setup.kind() == ProxKind::ScaledEuclideanL) lmax /= setup.scale();
  const double step = 1.0 / std::max(alpha * alpha * lmax, 1e-30);

  const double primal_at_u = alpha * (model.value(u) + h.value(u));  // V(u,u) = 0

  struct Eval {
    Vector x;
    Vector ell;
    double D;
    double gap;
    double tol;
  };
  auto evaluate = [&](const Vector& lam) {
    Eval e;
    e.x = prox_step(setup, Q, u, G.transpose() * lam, alpha, h);
    e.ell = v + G * (e.x - model.anchor);
    e.D = setup.bregman(e.x, u) + alpha * (lam.dot(e.ell) + h.value(e.x));
    e.gap = alpha * (e.ell.maxCoeff() - lam.dot(e.ell));
    e.tol = effective_tol(e.ell);
    // u competes under the same weak-duality certificate; at frozen fixed
    // points it is the exact minimizer while x*(lam) carries dual round-off.
    const double gap_u = primal_at_u - e.D;
    if (gap_u < e.gap) {
      e.gap = std::max(gap_u, 0.0);
      e.x = u;
    }
    return e;
  };

  Vector lam = Vector::Constant(M, 1.0 / M);
  Vector mu = lam;
  Eval cur = evaluate(lam);
  Vector best_lam = lam;
  Eval best = cur;
  double t = 1.0;
  int it = 0;

  for (; it < options.max_iterations && best.gap > best.tol; ++it) {
    const Eval at_mu = evaluate(mu);
    const Vector lam_new = project_simplex(mu + (step * alpha) * at_mu.ell);
    const Eval next = evaluate(lam_new);

    if (next.gap < best.gap) {
      best = next;
      best_lam = lam_new;
    }
    if (next.D < cur.D) {
      // Lost monotonicity: restart the momentum.
      mu = lam_new;
      t = 1.0;
    } else {
      const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      mu = lam_new + ((t - 1.0) / t_new) * (lam_new - lam);
      // Momentum may leave the simplex; the next projection handles it.
      t = t_new;
    }
    lam = lam_new;
    cur = next;
  }

  if (best.gap > best.tol) {
    std::ostringstream os;
    os << "minimax_prox_step: dual ascent did not reach gap " << best.tol << " within "
       << options.max_iterations << " iterations (residual " << best.gap << ")";
    throw SubproblemError(os.str(), best.x, best.gap);
  }

  MinimaxProxResult res;
  res.x = std::move(best.x);
  res.lambda = std::move(best_lam);
  res.gap = best.gap;
  res.iterations = it;
  return res;
}

Vector minimax_prox_step(const ProxSetup& setup, const FeasibleSet& Q, const Vector& u,
                         const LinearModel& model, double alpha, const Composite& h,
                         const MinimaxProxOptions& options) {
  return minimax_prox_step_full(setup, Q, u, model, alpha, h, options).x;
}

}  // namespace mtm
