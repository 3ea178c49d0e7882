#pragma once

#include <cstdint>

namespace rg {

// Identifier reported alongside benchmark results; anything that changes the
// generated sequence must bump it.
inline constexpr const char* kRngId = "xoshiro256ss+splitmix64/v1";

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// O(1) random access into the splitmix64 stream; used to derive independent
// per-worker and per-playout seeds from one master seed.
inline uint64_t splitmix64_at(uint64_t master, uint64_t index) {
  uint64_t state = master + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64(state);
}

// xoshiro256**: small, fast, portable; seeded through splitmix64 so that any
// 64-bit seed (including 0) yields a healthy state.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) { reseed(seed); }

  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased draw from [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4] = {};
};

}  // namespace rg
