#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace qsv {

// splitmix64 mixing step; used to fold (seed, stream path) into one engine seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4a2ca9f13d195ULL;
  return x ^ (x >> 31);
}

// Deterministic random stream addressed by (seed, path...).  Every protocol
// trial gets its own stream so trial t is reproducible regardless of how many
// workers run and in which order (the merge is by trial index).
//
// All floating-point draws are derived from the raw mt19937_64 bit stream
// (which the standard pins down exactly), not from std::*_distribution, so a
// given (seed, path) produces identical draws on any conforming toolchain.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    engine_.seed(s);
  }

  static RngStream for_trial(std::uint64_t seed, std::uint64_t trial) {
    return RngStream(seed, {0x747269616cULL, trial});  // "trial" sub-space
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in {0, ..., n-1} by rejection (unbiased).
  int uniform_int(int n) {
    const std::uint64_t bound = ~0ULL - ~0ULL % static_cast<std::uint64_t>(n);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= bound);
    return static_cast<int>(r % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Box-Muller; one spare value is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Draw an index from a finite distribution given as cumulative weights.
  // The last cumulative weight is treated as the total mass.
  int categorical_from_cumulative(const double* cumulative, int count) {
    const double u = uniform() * cumulative[count - 1];
    int lo = 0, hi = count - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cumulative[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qsv
