#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace finsent {

// std::mt19937's output sequence is pinned by the standard; the <random>
// distributions are not. All sampling goes through these helpers so results
// are identical across compilers.

inline double uniform01(std::mt19937& rng) {
  const std::uint64_t hi = rng() >> 5;  // 27 bits
  const std::uint64_t lo = rng() >> 6;  // 26 bits
  return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) / 9007199254740992.0;
}

inline std::uint32_t bounded(std::mt19937& rng, std::uint32_t n) {
  return rng() % n;
}

inline std::vector<int> shuffled_indices(int n, std::mt19937& rng) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(bounded(rng, static_cast<std::uint32_t>(i + 1)));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

}  // namespace finsent
