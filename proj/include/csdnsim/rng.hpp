#pragma once

// csdnsim/rng.hpp — seeded random draws for workload generation.
//
// Only std::mt19937_64 (whose output sequence is fixed by the standard) is
// taken from the library; every distribution is derived by hand so a given
// seed produces the same stream on any toolchain.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace csdnsim {

// splitmix64; used to derive independent substream seeds from (seed, tag).
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  Rng(uint64_t seed, uint64_t stream_tag) : engine_(mix_seed(seed, stream_tag)) {}

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const auto span = static_cast<uint64_t>(hi - lo);
    if (span == UINT64_MAX) return static_cast<int64_t>(engine_());
    // rejection sampling keeps the draw unbiased
    const uint64_t n = span + 1;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % n);
  }

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return -std::log1p(-uniform01()) / rate;
  }

  // Index drawn from a discrete distribution given its cumulative weights
  // (non-decreasing, last entry treated as the total mass).
  std::size_t categorical(std::span<const double> cumulative) {
    if (cumulative.empty()) throw std::invalid_argument("categorical: empty weights");
    const double u = uniform01() * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cumulative[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csdnsim
