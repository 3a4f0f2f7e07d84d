#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qplab {

using Element = std::uint32_t;

/// Fixed-universe bit set over {0..n-1}. Used for group subsets, coset
/// index sets and point subsets alike.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  static Subset full(std::size_t universe);
  static Subset of(std::size_t universe, std::span<const Element> elements);

  std::size_t universe() const noexcept { return n_; }

  bool test(Element x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void set(Element x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void reset(Element x) noexcept { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<Element>(i * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  std::vector<Element> elements() const;

  /// Number of elements present in both sets.
  std::size_t intersection_count(const Subset& other) const noexcept;

  Subset& operator&=(const Subset& other) noexcept;
  Subset& operator|=(const Subset& other) noexcept;
  bool operator==(const Subset& other) const noexcept = default;

  /// Lexicographic comparison of the sorted element lists.
  bool lex_less(const Subset& other) const;

  /// FNV-1a over the universe size and member list; stable across platforms.
  std::uint64_t digest() const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qplab
