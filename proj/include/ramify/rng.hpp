#pragma once

#include <cstdint>

namespace ramify {

// Splittable deterministic generator (splitmix64 core). All randomized sweeps
// take one of these so runs are reproducible from a single seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n = 0 is a caller bug; returns 0.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    return next() % n;
  }

  long range(long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1) != 0; }

  Rng split(std::uint64_t label) {
    std::uint64_t z = (state_ ^ (label * 0xd1342543de82ef95ULL)) + 0x2545f4914f6cdd1dULL;
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return Rng(z ^ (z >> 33));
  }

 private:
  std::uint64_t state_;
};

}  // namespace ramify
