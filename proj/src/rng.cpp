#include "mtm/rng.hpp"

#include <cmath>
#include <cstring>

namespace mtm {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitRng::SplitRng(std::uint64_t seed, std::uint64_t key1, std::uint64_t key2)
    : seed_(seed) {
  // Fold the keys into the state one at a time; mix64 is a bijection, so
  // distinct (seed, key1, key2) triples give distinct streams.
  state_ = mix64(mix64(mix64(seed) ^ key1) ^ key2);
}

SplitRng SplitRng::substream(std::uint64_t key1, std::uint64_t key2) const {
  SplitRng r(seed_);
  r.state_ = mix64(mix64(state_ ^ key1) ^ key2);
  return r;
}

std::uint64_t SplitRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double SplitRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
}

std::uint64_t SplitRng::below(std::uint64_t n) {
  // Rejection sampling over the top bits keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Eigen::VectorXd SplitRng::unit_sphere(int n) {
  Eigen::VectorXd e(n);
  double norm2;
  do {
    for (int i = 0; i < n; ++i) e[i] = normal();
    norm2 = e.squaredNorm();
  } while (norm2 == 0.0);
  return e / std::sqrt(norm2);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_vector(const Eigen::VectorXd& v, std::uint64_t salt) {
  std::uint64_t h = fnv1a64(&salt, sizeof(salt));
  if (v.size() > 0)
    h = fnv1a64(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double), h);
  return h;
}

}  // namespace mtm
