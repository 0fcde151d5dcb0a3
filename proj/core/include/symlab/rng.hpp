#pragma once

#include <cstdint>

namespace symlab {

// Small deterministic generator (splitmix64).  Used instead of <random>
// distributions so that scenario outputs are bit-reproducible across
// standard library implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  // Independent derived stream (stable under unrelated draw-count changes).
  Rng fork(std::uint64_t stream) const {
    Rng r(state ^ (0x632be59bd9b4e019ull * (stream + 1)));
    r.next();
    return r;
  }
};

}  // namespace symlab
