#include "mtm/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mtm {

std::pair<double, Vector> exact_eval(const Problem& problem, const Vector& x) {
  return {problem.value(x), problem.grad(x)};
}

// ---------------------------------------------------------------------------
// DeltaLOracle
// ---------------------------------------------------------------------------

DeltaLOracle::DeltaLOracle(Problem problem, double delta, PerturbationMode mode,
                           std::uint64_t seed)
    : problem_(std::move(problem)), delta_(delta), mode_(mode), seed_(seed) {
  if (delta < 0.0) throw std::invalid_argument("DeltaLOracle: delta must be >= 0");
}

double DeltaLOracle::zeta(const Vector& y) const {
  switch (mode_) {
    case PerturbationMode::Zero: return 0.0;
    case PerturbationMode::Constant: return 1.0;
    case PerturbationMode::SeededRandom: {
      // Deterministic in (seed, y): replaying a query reproduces the answer.
      SplitRng rng(seed_, hash_vector(y, 0xD517A0C1ULL));
      return rng.next_double();
    }
  }
  return 0.0;
}

std::pair<double, Vector> DeltaLOracle::eval(const Vector& y) const {
  return {value(y), problem_.grad(y)};
}

double DeltaLOracle::value(const Vector& y) const {
  if (delta_ == 0.0) return problem_.value(y);
  return problem_.value(y) - zeta(y) * delta_;
}

std::pair<double, Vector> delta_eval(const DeltaLOracle& oracle, const Vector& y) {
  return oracle.eval(y);
}

// ---------------------------------------------------------------------------
// StochasticOracle
// ---------------------------------------------------------------------------

StochasticOracle::StochasticOracle(DeltaLOracle inner, double variance_proxy_D,
                                   std::uint64_t seed)
    : inner_(std::move(inner)), D_(variance_proxy_D), seed_(seed) {
  if (D_ < 0.0) throw std::invalid_argument("StochasticOracle: D must be >= 0");
}

Vector StochasticOracle::noise(int dim, SplitRng& rng) const {
  if (D_ == 0.0) return Vector::Zero(dim);
  const Vector dir = rng.unit_sphere(dim);
  const double r = rng.uniform(0.0, std::sqrt(D_));
  return r * dir;
}

namespace {
// The sequential stream lives under its own key so keyed solver streams and
// ad-hoc draws never collide.
constexpr std::uint64_t kSequentialKey = 0x5e9badf00dULL;
}  // namespace

Vector StochasticOracle::sample_keyed(const Vector& y, std::uint64_t key1,
                                      std::uint64_t key2, std::uint64_t draw) const {
  SplitRng rng = SplitRng(seed_).substream(key1, key2).substream(draw);
  return inner_.problem().grad(y) + noise(static_cast<int>(y.size()), rng);
}

Vector StochasticOracle::mini_batch_keyed(const Vector& y, int m, std::uint64_t key1,
                                          std::uint64_t key2) const {
  if (m < 1) throw std::invalid_argument("mini_batch: m must be >= 1");
  const Vector g = inner_.problem().grad(y);
  if (D_ == 0.0) return g;
  Vector acc = Vector::Zero(y.size());
  SplitRng base = SplitRng(seed_).substream(key1, key2);
  for (int j = 0; j < m; ++j) {
    SplitRng rng = base.substream(static_cast<std::uint64_t>(j));
    acc += noise(static_cast<int>(y.size()), rng);
  }
  return g + acc / static_cast<double>(m);
}

Vector StochasticOracle::sample(const Vector& y) {
  SplitRng rng = SplitRng(seed_).substream(kSequentialKey, 0).substream(counter_++);
  return inner_.problem().grad(y) + noise(static_cast<int>(y.size()), rng);
}

Vector StochasticOracle::mini_batch(const Vector& y, int m) {
  if (m < 1) throw std::invalid_argument("mini_batch: m must be >= 1");
  const Vector g = inner_.problem().grad(y);
  if (D_ == 0.0) return g;
  Vector acc = Vector::Zero(y.size());
  for (int j = 0; j < m; ++j) {
    SplitRng rng = SplitRng(seed_).substream(kSequentialKey, 0).substream(counter_++);
    acc += noise(static_cast<int>(y.size()), rng);
  }
  return g + acc / static_cast<double>(m);
}

Vector stochastic_eval(StochasticOracle& oracle, const Vector& y) { return oracle.sample(y); }

Vector mini_batch_eval(StochasticOracle& oracle, const Vector& y, int m) {
  return oracle.mini_batch(y, m);
}

// ---------------------------------------------------------------------------
// DirectionScheme
// ---------------------------------------------------------------------------

DirectionScheme::DirectionScheme(DirectionKind kind, int dimension, std::uint64_t seed)
    : kind_(kind), n_(dimension), seed_(seed) {
  if (dimension < 1) throw std::invalid_argument("DirectionScheme: dimension must be >= 1");
}

Vector DirectionScheme::draw(SplitRng& rng) const {
  if (kind_ == DirectionKind::UniformSphere) return rng.unit_sphere(n_);
  Vector e = Vector::Zero(n_);
  const auto i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
  e[i] = rng.next_double() < 0.5 ? -1.0 : 1.0;
  return e;
}

Vector DirectionScheme::sample() { return sample_at(counter_++); }

Vector DirectionScheme::sample_at(std::uint64_t index) const {
  SplitRng rng = SplitRng(seed_).substream(0x0d17ec7ULL, index);
  return draw(rng);
}

Vector sample_direction(DirectionScheme& scheme) { return scheme.sample(); }

// ---------------------------------------------------------------------------
// Directional / zeroth-order estimators
// ---------------------------------------------------------------------------

Vector directional_eval(const Problem& problem, const Vector& y, const Vector& e,
                        double noise, double delta_bound) {
  if (std::abs(noise) > delta_bound) {
    std::ostringstream os;
    os << "directional_eval: |noise| = " << std::abs(noise)
       << " violates the contract bound delta = " << delta_bound;
    throw std::invalid_argument(os.str());
  }
  const double n = static_cast<double>(y.size());
  return n * (problem.grad(y).dot(e) + noise) * e;
}

Vector finite_diff_eval(const Problem& problem, const Vector& x, const Vector& e,
                        double tau, double d1, double d2) {
  if (!(tau > 0.0)) throw std::invalid_argument("finite_diff_eval: tau must be positive");
  const double n = static_cast<double>(x.size());
  const double fwd = problem.value(x + tau * e) + d1;
  const double here = problem.value(x) + d2;
  return (n / tau) * (fwd - here) * e;
}

}  // namespace mtm
