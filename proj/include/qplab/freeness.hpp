#pragma once

#include <cstdint>
#include <optional>

#include "qplab/budget.hpp"
#include "qplab/group.hpp"
#include "qplab/rational.hpp"

namespace qplab {

struct TripleCount {
  Subset a, b, c;
  Rational r, s, t;
  std::uint64_t count = 0;
  std::optional<Rational> p;  // count = p r s t n^2; defined when r, s, t > 0
};

/// #{(a, b) in A x B : ab in C}.
TripleCount count_solutions(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c);

/// The same count organised by target: sum over c in C of #{a in A : a^-1 c in B}.
/// These are the row sums of the C-by-A submatrix of the B-incidence matrix.
std::uint64_t count_solutions_by_rows(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c);

bool is_product_free(const FiniteGroup& g, const Subset& s);

struct PoorCertificate {
  Subset subset;
  std::uint64_t pair_count = 0;
  Rational p_achieved;  // pair_count / |S|^2
  Rational claim_p;
  bool is_poor = false;
};

PoorCertificate poor_certificate(const FiniteGroup& g, const Subset& s, const Rational& p);

struct DensityBoundReport {
  TripleCount triple;
  std::size_t delta = 0;
  Rational lhs;  // r s t (1 - p)^2 delta
  bool holds = false;
};

/// Checks r s t (1 - p)^2 delta <= 1 + 1e-9 with exact rationals.
DensityBoundReport check_density_bound(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c);
DensityBoundReport check_density_bound(const FiniteGroup& g, std::size_t delta, const Subset& a, const Subset& b,
                                const Subset& c);

struct AlphaResult {
  std::size_t alpha = 0;
  Subset witness;
  bool exact = false;
  std::uint64_t nodes_explored = 0;
};

struct AlphaOptions {
  SearchBudget budget{};
  std::size_t exact_order_cap = 32;
  std::uint64_t seed = 0xCAFEBABEULL;
  std::uint64_t restarts = 64;  // heuristic: random greedy restarts after the coset seeds
};

/// Largest product-free subset. Exact branch and bound in exact mode
/// (lexicographically smallest optimum); greedy + swaps from coset seeds in
/// heuristic mode.
AlphaResult max_product_free(const FiniteGroup& g, const AlphaOptions& opts = {});

struct PoorSizeReport {
  bool applicable = false;
  std::size_t delta = 0;
  PoorCertificate certificate;
  double p_limit = 0;         // delta^(-1/3)
  double empirical_c = 0;     // |S| delta^(1/3) / n
};

/// Reads the size bound as c * n / delta^(1/3) and reports the constant c
/// this instance requires.
PoorSizeReport poor_set_size(const FiniteGroup& g, const Subset& s, const Rational& p);

}  // namespace qplab
