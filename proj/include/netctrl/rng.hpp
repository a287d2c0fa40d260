#ifndef NETCTRL_RNG_HPP_
#define NETCTRL_RNG_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

namespace netctrl {

/// SplitMix64 finalizer (Steele, Lea & Flood; the java.util.SplittableRandom
/// mixing function). Used both as the generator step and to derive
/// independent stream seeds from (seed, salt) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Portable 64-bit PRNG with a fixed published algorithm so that ensembles
/// reproduce bit-exactly across platforms and standard libraries.
/// Deliberately not std::uniform_real_distribution, whose output is
/// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a salt
/// (e.g. realization index). Streams with distinct salts are decorrelated
/// by the mix64 avalanche.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ mix64(salt + 0x9E3779B97F4A7C15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt1,
                                 std::uint64_t salt2) {
  return derive_seed(derive_seed(seed, salt1), salt2);
}

/// Uniform m-subset of {0, ..., n-1} without replacement (partial
/// Fisher-Yates), returned sorted ascending.
inline std::vector<long> sample_subset(SplitMix64& rng, long n, long m) {
  std::vector<long> pool(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (long i = 0; i < m; ++i) {
    const long j =
        i + static_cast<long>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace netctrl

#endif  // NETCTRL_RNG_HPP_
