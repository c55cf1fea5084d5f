#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace priorshift {

// Deterministic, bit-portable random number generation.
//
// The generator is SplitMix64: a 64-bit counter advanced by a fixed odd
// increment and passed through an avalanching finalizer. Unlike the standard
// library distributions (whose output is implementation-defined), every draw
// here is specified exactly, so datasets and shuffles are identical across
// platforms and compilers.
//
// Independent streams are derived by hashing a (seed, tag...) tuple into the
// initial counter. Callers split one stream per logical purpose, e.g. one per
// (seed, domain, sample index) during data generation, which makes generation
// order-independent and parallelizable.

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  // Derive a stream from a seed and up to three tags (purpose, domain, index).
  static Rng stream(std::uint64_t seed, std::uint64_t tag0 = 0,
                    std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
    std::uint64_t s = mix64(seed + 0x9E3779B97F4A7C15ULL);
    s = mix64(s ^ mix64(tag0 + 0xD1B54A32D192ED03ULL));
    s = mix64(s ^ mix64(tag1 + 0x8CB92BA72F3D8DD7ULL));
    s = mix64(s ^ mix64(tag2 + 0xABCC79579C3D9C85ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via the Marsaglia polar method. The second value of each
  // accepted pair is discarded so that consumption per call is self-contained.
  double normal();

  // Index drawn from an (unnormalized is not allowed) probability vector by
  // cumulative scan; the final index absorbs any rounding shortfall.
  int categorical(const std::vector<double>& probs);

  // Uniform integer in [0, bound) by rejection, bias-free.
  std::uint64_t below(std::uint64_t bound);

  // In-place Fisher-Yates shuffle of the identity permutation of size n.
  std::vector<int> permutation(int n);

 private:
  std::uint64_t state_;
};

}  // namespace priorshift
