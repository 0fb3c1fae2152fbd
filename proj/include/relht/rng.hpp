#pragma once

// Deterministic, platform-independent random streams.
//
// Streams are xoshiro256** generators seeded through a splitmix64 chain, so
// a (master_seed, trial_index) pair names the same stream on every platform
// and under any thread schedule. Bounded draws use plain rejection, never
// std::uniform_int_distribution (whose output is implementation-defined).

#include <array>
#include <cstdint>

namespace relht {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t v = next_u64();
      if (v >= threshold) return v % bound;
    }
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

// Stream for one trial of an experiment: mixes the index into the master seed
// through splitmix64 before seeding, so streams for distinct indices are
// unrelated for testing purposes.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::uint64_t sm = master_seed;
  std::uint64_t a = splitmix64(sm);
  sm = a ^ (trial_index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = splitmix64(sm);
  return Rng(b);
}

}  // namespace relht
