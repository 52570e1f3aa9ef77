#pragma once

#include <cstdint>
#include <random>

#include "gfou/special_functions.hpp"

namespace gfou {

/// SplitMix64 mixing step. Used to derive well-separated seeds from a
/// master seed plus stream coordinates; never used as the sampling engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
  return splitmix64(splitmix64(master) ^ (0xD1B54A32D192ED03ULL * (a + 1)));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

/// Deterministic standard-normal stream. mt19937_64 output mapped through
/// the AS 241 quantile; both steps are fully specified, so a seed pins the
/// sample sequence bit-for-bit on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53-bit mantissa, shifted into (0,1) so the quantile never sees 0.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform()); }

 private:
  std::mt19937_64 engine_;
};

} // namespace gfou
