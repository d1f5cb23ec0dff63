#ifndef MTM_ORACLE_HPP
#define MTM_ORACLE_HPP

#include <cstdint>
#include <utility>

#include "mtm/problem.hpp"
#include "mtm/rng.hpp"

namespace mtm {

/// Exact first-order oracle of an analytic problem.
std::pair<double, Vector> exact_eval(const Problem& problem, const Vector& x);

enum class PerturbationMode { Zero, Constant, SeededRandom };

/// Inexact oracle built by value perturbation only:
///   f_delta(y) = f(y) - zeta(y) * delta,   grad f_delta(y) = grad f(y),
/// with zeta(y) in [0, 1].  The gradient is untouched, so the two-sided
/// inexactness inequality and the sandwich f_delta <= f <= f_delta + delta
/// hold by construction.
class DeltaLOracle {
 public:
  DeltaLOracle(Problem problem, double delta,
               PerturbationMode mode = PerturbationMode::Constant, std::uint64_t seed = 0);

  /// (f_delta(y), grad f_delta(y))
  std::pair<double, Vector> eval(const Vector& y) const;
  /// f_delta(y) alone.
  double value(const Vector& y) const;
  /// Mode-dependent perturbation weight in [0, 1], deterministic in (seed, y).
  double zeta(const Vector& y) const;

  const Problem& problem() const { return problem_; }
  double delta() const { return delta_; }
  double lipschitz() const { return problem_.lipschitz; }
  PerturbationMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Problem problem_;
  double delta_;
  PerturbationMode mode_;
  std::uint64_t seed_;
};

std::pair<double, Vector> delta_eval(const DeltaLOracle& oracle, const Vector& y);

/// Stochastic (delta, L)-oracle with sphere-bounded noise: each gradient
/// sample is grad f_delta(y) + eta with eta uniform on a sphere of seeded
/// random radius r in [0, sqrt(D)].  Mean zero by symmetry; |eta| <= sqrt(D)
/// almost surely, so the sub-Gaussian moment condition holds exactly.
class StochasticOracle {
 public:
  StochasticOracle(DeltaLOracle inner, double variance_proxy_D, std::uint64_t seed);

  /// One draw from the sequential stream (advances the internal counter).
  Vector sample(const Vector& y);
  /// Mean of m draws consuming m consecutive states of the internal stream.
  Vector mini_batch(const Vector& y, int m);

  /// Keyed draws: substream (key1, key2) never perturbs other keys, so batch
  /// sizes may change between retries without touching other iterations.
  Vector sample_keyed(const Vector& y, std::uint64_t key1, std::uint64_t key2,
                      std::uint64_t draw) const;
  Vector mini_batch_keyed(const Vector& y, int m, std::uint64_t key1,
                          std::uint64_t key2) const;

  const DeltaLOracle& inner() const { return inner_; }
  double variance_proxy() const { return D_; }
  std::uint64_t seed() const { return seed_; }
  void reset_stream() { counter_ = 0; }

 private:
  Vector noise(int dim, SplitRng& rng) const;

  DeltaLOracle inner_;
  double D_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

Vector stochastic_eval(StochasticOracle& oracle, const Vector& y);
Vector mini_batch_eval(StochasticOracle& oracle, const Vector& y, int m);

enum class DirectionKind { UniformSphere, UniformCoordinate };

/// Random unit directions with E e e' = I/n for both schemes.
class DirectionScheme {
 public:
  DirectionScheme(DirectionKind kind, int dimension, std::uint64_t seed);

  /// Next direction of the sequential stream.
  Vector sample();
  /// Direction of the substream keyed by an iteration index (replayable).
  Vector sample_at(std::uint64_t index) const;

  DirectionKind kind() const { return kind_; }
  int dimension() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  void reset_stream() { counter_ = 0; }

 private:
  Vector draw(SplitRng& rng) const;

  DirectionKind kind_;
  int n_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

Vector sample_direction(DirectionScheme& scheme);

/// n (<grad f(y), e> + noise) e.  |noise| must not exceed delta_bound.
Vector directional_eval(const Problem& problem, const Vector& y, const Vector& e,
                        double noise, double delta_bound);

/// (n / tau) (f(x + tau e) + d1 - f(x) - d2) e.  The induced scalar noise is
/// bounded by L tau / 2 + 2 delta / tau when |d1|, |d2| <= delta.
Vector finite_diff_eval(const Problem& problem, const Vector& x, const Vector& e,
                        double tau, double d1, double d2);

}  // namespace mtm

#endif  // MTM_ORACLE_HPP
