#pragma once

#include <chrono>
#include <cstdint>

namespace qplab {

enum class SearchMode { exact, heuristic };

struct SearchBudget {
  std::uint64_t node_cap = 50'000'000;
  double time_cap_s = 60.0;
  SearchMode mode = SearchMode::exact;
};

/// Tracks node count and wall clock against a SearchBudget.
class BudgetMeter {
 public:
  explicit BudgetMeter(const SearchBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  /// Counts one node; returns false once the budget is exhausted.
  bool tick() {
    ++nodes_;
    if (nodes_ > budget_.node_cap) exhausted_ = true;
    if ((nodes_ & 0xfff) == 0) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      if (dt.count() > budget_.time_cap_s) exhausted_ = true;
    }
    return !exhausted_;
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace qplab
