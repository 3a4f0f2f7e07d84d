#include <algorithm>

#include "qplab/error.hpp"
#include "qplab/rng.hpp"
#include "qplab/subset.hpp"

namespace qplab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::not_a_group: return "not_a_group";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::not_applicable: return "not_applicable";
  }
  return "unknown";
}

Subset Subset::full(std::size_t universe) {
  Subset s(universe);
  for (Element x = 0; x < universe; ++x) s.set(x);
  return s;
}

Subset Subset::of(std::size_t universe, std::span<const Element> elements) {
  Subset s(universe);
  for (auto x : elements) {
    if (x >= universe) throw Error(ErrorCode::invalid_argument, "subset element " + std::to_string(x) + " out of range");
    s.set(x);
  }
  return s;
}

std::vector<Element> Subset::elements() const {
  std::vector<Element> out;
  out.reserve(count());
  for_each([&](Element x) { out.push_back(x); });
  return out;
}

std::size_t Subset::intersection_count(const Subset& other) const noexcept {
  std::size_t c = 0;
  const std::size_t w = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < w; ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
  return c;
}

Subset& Subset::operator&=(const Subset& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  return *this;
}

Subset& Subset::operator|=(const Subset& other) noexcept {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

bool Subset::lex_less(const Subset& other) const {
  const auto a = elements();
  const auto b = other.elements();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::uint64_t Subset::digest() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(n_);
  for_each([&](Element x) { mix(x); });
  return h;
}

std::vector<std::uint32_t> Rng::sample(std::uint32_t n, std::uint32_t k) {
  // Floyd's algorithm.
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(below(std::uint64_t{j} + 1));
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qplab
