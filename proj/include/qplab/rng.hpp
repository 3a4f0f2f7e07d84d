#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qplab {

inline constexpr std::uint64_t kDefaultSeed = 3405691582ULL;  // 0xCAFEBABE

/// mt19937_64 with hand-rolled range reduction. The standard distributions
/// are implementation-defined, which would break report reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform real in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin(double p_true) { return unit() < p_true; }

  /// k distinct values from [0, n), ascending.
  std::vector<std::uint32_t> sample(std::uint32_t n, std::uint32_t k);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qplab
