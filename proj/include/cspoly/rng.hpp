#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace cspoly {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic RNG with fully specified derived distributions. The standard
/// library distributions are implementation-defined, so bounded integers and
/// unit doubles are generated here explicitly; reports stay byte-identical
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Stream for trial `index` of a campaign with master `seed`. Trials are
  /// independent of execution order.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x51409ce3f70b1b6fULL + index);
    splitmix64(s);
    return Rng(splitmix64(s));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Unbiased uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// k distinct indices in [0, n), ascending.
  std::vector<int> distinct_indices(int k, int n) {
    if (k > n) throw std::invalid_argument("Rng::distinct_indices: k > n");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    while (static_cast<int>(out.size()) < k) {
      const int candidate = static_cast<int>(below(static_cast<std::uint64_t>(n)));
      bool dup = false;
      for (const int v : out) dup = dup || (v == candidate);
      if (!dup) out.push_back(candidate);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cspoly
