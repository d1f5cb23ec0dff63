#ifndef MTM_RNG_HPP
#define MTM_RNG_HPP

#include <Eigen/Core>
#include <cstdint>

namespace mtm {

/// Counter-based splittable generator (SplitMix64 core).
///
/// Every stream is addressed by (seed, key1, key2), so a solver can hand out
/// independent substreams keyed by e.g. (iteration, retry) and later draws
/// never perturb earlier ones when batch sizes change.  Replaying the same
/// seed and query sequence is bit-exact.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed, std::uint64_t key1 = 0, std::uint64_t key2 = 0);

  /// Independent substream of this generator.
  SplitRng substream(std::uint64_t key1, std::uint64_t key2 = 0) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double next_double();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via the polar (Marsaglia) method; no trig calls.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniformly distributed point on the unit sphere S^{n-1}.
  Eigen::VectorXd unit_sphere(int n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a 64-bit hash, used for content hashes and value-keyed streams.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t basis = 1469598103934665603ULL);

/// Hash of a vector's bit pattern (stable across runs on one platform).
std::uint64_t hash_vector(const Eigen::VectorXd& v, std::uint64_t salt);

}  // namespace mtm

#endif  // MTM_RNG_HPP
