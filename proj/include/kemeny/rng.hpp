#pragma once

#include <array>
#include <cstdint>

namespace kemeny {

// splitmix64 step; used to expand seeds and to hash stream tags.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent substream seed from an experiment seed and up to
// three tags (instance index, epoch, step, ...). Pure function, so any
// worker can reconstruct its stream without shared RNG state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= b + 0x7f4a7c159e3779b9ULL;
  h ^= splitmix64(s);
  s ^= c + 0x6c62272e07bb0142ULL;
  h ^= splitmix64(s);
  return h;
}

// xoshiro256**: a small, fast, portable 64-bit generator. The standard
// library's engines are portable but its distributions are not, so bounded
// sampling and unit doubles are implemented here explicitly; profiles and
// training runs reproduce bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
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

  // Unbiased integer in [0, bound), bound >= 1. Rejection sampling on the
  // top bits; the rejection region is < 2^-32 for desk-scale bounds.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Fisher-Yates shuffle.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      const auto j = static_cast<decltype(i)>(next_below(static_cast<std::uint64_t>(i) + 1));
      if (j != i) std::swap(first[i], first[j]);
    }
  }

  std::array<std::uint64_t, 4> state() const { return state_; }

  static Rng from_state(const std::array<std::uint64_t, 4>& state) {
    Rng r(0);
    r.state_ = state;
    return r;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace kemeny
