#pragma once

#include <cstdint>
#include <vector>

namespace ciu {

// SplitMix64 generator. Every randomized component in the pipeline draws
// through this class so that results are identical across platforms and
// standard library implementations (std::uniform_int_distribution is not
// portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Independent stream for (seed, stream_id): parallel-safe derivation used by
// per-tree, per-resample and per-cell RNGs. Serial and parallel execution of
// consumers therefore see identical draws.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream_id) {
  Rng mixer(seed ^ (0xA0761D6478BD642Full * (stream_id + 1)));
  mixer.next_u64();
  return mixer.next_u64();
}

inline Rng derive_rng(uint64_t seed, uint64_t stream_id) {
  return Rng(derive_seed(seed, stream_id));
}

}  // namespace ciu
