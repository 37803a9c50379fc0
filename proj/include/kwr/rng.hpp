#pragma once

#include <cstdint>

namespace kwr {

// Deterministic counter-keyed stream: the generator state is derived from
// (seed, key_a, key_b, key_c) alone, so chunked Monte Carlo runs give
// bit-identical results under any scheduling.
class Stream {
 public:
  static Stream keyed(uint64_t seed, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    Stream st;
    uint64_t x = seed;
    auto mix = [&x](uint64_t v) {
      x += 0x9e3779b97f4a7c15ULL + v;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    st.s_[0] = mix(a);
    st.s_[1] = mix(b);
    st.s_[2] = mix(c);
    st.s_[3] = mix(0x5bf03635aad2c2dbULL);
    if ((st.s_[0] | st.s_[1] | st.s_[2] | st.s_[3]) == 0) st.s_[0] = 1;
    return st;
  }

  // xoshiro256**
  uint64_t next() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform angle in [0, 2*pi)
  double angle() { return uniform01() * 6.283185307179586476925286766559; }

 private:
  uint64_t s_[4] = {0, 0, 0, 0};
};

}  // namespace kwr
