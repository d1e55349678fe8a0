#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "surfgrow/lattice.hpp"

namespace surfgrow {

// Counter-based Gaussian stream. Every draw is a pure function of
// (master seed, sample, step, mode), so ensembles reproduce bit-for-bit
// regardless of worker count, and runs on different truncations see the
// same increment for a shared mode.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t sample)
      : key_(splitmix64(splitmix64(master_seed) ^ (sample * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

  [[nodiscard]] std::uint64_t key() const { return key_; }

  /// Standard normal draw for (step, mode).
  [[nodiscard]] double gaussian(std::uint64_t step, Mode k) const {
    const auto code = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.k1)) << 32) |
                      static_cast<std::uint32_t>(k.k2);
    const std::uint64_t base = splitmix64(key_ ^ splitmix64(step ^ splitmix64(code)));
    const std::uint64_t b1 = splitmix64(base);
    const std::uint64_t b2 = splitmix64(base ^ 0xa0761d6478bd642fULL);
    // 53-bit uniforms; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(b1 >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace surfgrow
