#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace kacmix {

// Deterministic, substream-capable random source.
//
// Every trial / trajectory / replicate owns its own RngStream derived from
// (seed, stream id), so results are bit-identical for any thread count and
// independent of scheduling. xoshiro256++ core, splitmix64 seeding. We do not
// use <random> distributions because their output is implementation-defined;
// all variates below are generated by explicit, portable arithmetic.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = splitmix(seed ^ 0x9e3779b97f4a7c15ull);
    x = splitmix(x ^ splitmix(stream + 0xbf58476d1ce4e5b9ull));
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ull;
      word = mix(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform on [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on [0, 2*pi)
  double next_angle() { return next_double() * two_pi(); }

  // uniform on {0, ..., bound-1} by rejection (no modulo bias)
  int next_index(int bound) {
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % b);
  }

  // uniform over the n*(n-1)/2 index pairs 0 <= i < j < n
  std::pair<int, int> next_pair(int n) {
    int k = next_index(n * (n - 1) / 2);
    for (int i = 0; i < n - 1; ++i) {
      const int row = n - 1 - i;
      if (k < row) return {i, i + 1 + k};
      k -= row;
    }
    return {n - 2, n - 1};  // unreachable
  }

  // standard normal, Box-Muller (second variate cached)
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    const double v = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = two_pi() * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  static constexpr double two_pi() { return 6.283185307179586476925286766559; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t splitmix(std::uint64_t z) {
    return mix(z + 0x9e3779b97f4a7c15ull);
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kacmix
