#pragma once

#include <cstdint>
#include <random>

namespace ckpt {

using Engine = std::mt19937_64;

/// Trials are grouped into blocks of this size; each block owns an engine
/// seeded from (seed, block index). Results therefore do not depend on how
/// blocks are distributed over threads.
inline constexpr std::uint64_t kBlockSize = 4096;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) noexcept {
  return splitmix64(splitmix64(base) ^ (a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return derive_seed(derive_seed(base, a), b);
}

/// Uniform double in the open interval (0, 1).
template <class URBG>
double uniform_open01(URBG& g) {
  static_assert(URBG::min() == 0 && URBG::max() == ~std::uint64_t{0},
                "needs a full-range 64-bit generator");
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ckpt
