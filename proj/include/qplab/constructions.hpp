#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qplab/budget.hpp"
#include "qplab/group.hpp"
#include "qplab/rational.hpp"

namespace qplab {

/// Triples (i, j, l) of left cosets with (g_i H)(g_j H) meeting g_l H.
struct CosetTripleRelation {
  std::size_t k = 0;
  std::vector<std::uint8_t> triples;  // k^3, index (i*k + j)*k + l
  bool contains(std::size_t i, std::size_t j, std::size_t l) const { return triples[(i * k + j) * k + l] != 0; }
  /// Number of l with (i, j, l) in the relation.
  std::size_t targets(std::size_t i, std::size_t j) const;
};

CosetTripleRelation coset_relation(const FiniteGroup& g, const SubgroupRecord& h);

struct RelationFreeResult {
  Subset cosets;  // over {0..k-1}
  std::size_t size = 0;
  bool exact = false;
  std::uint64_t nodes = 0;
  double empirical_c = 0;  // size / sqrt(k)
};

struct RelationFreeOptions {
  SearchBudget budget{};
  std::size_t exact_cap = 24;
  std::uint64_t seed = 0xCAFEBABEULL;
  std::uint64_t restarts = 256;  // greedy passes above exact_cap
};

/// Largest coset-index set U with no relation triple inside U.
RelationFreeResult max_relation_free(const CosetTripleRelation& rel, const RelationFreeOptions& opts = {});

/// Union of the cosets listed in U.
Subset coset_union(const SubgroupRecord& h, const Subset& cosets);

/// S(T) = {g : g(0) in T}. Point 0 plays the distinguished base point.
Subset point_action_set(const FiniteGroup& g, const PermutationAction& act, const Subset& points);

enum class SearchKind { exhaustive, sampled };

struct PointActionOptions {
  SearchKind kind = SearchKind::exhaustive;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0xCAFEBABEULL;
  std::uint64_t exhaustive_cap = 10'000'000;
  unsigned threads = 1;
};

struct PointActionReport {
  std::size_t n = 0;
  std::size_t m = 0;  // degree
  std::size_t k = 0;  // |T|
  std::vector<std::uint32_t> t_best;  // 0-indexed points, subset of {1..m-1}
  std::uint64_t count_best = 0;
  std::size_t set_size = 0;  // |S(T)| = k n / m
  double bound = 0;          // 4 n^2 k^3 / (m-3)^3
  bool exhaustive = false;
  std::uint64_t candidates = 0;
  std::uint64_t seed = 0;
  // Exhaustive mode only: the averaging chain.
  std::optional<BigInt> average_lhs;     // sum over T of the count
  std::optional<BigInt> average_middle;  // 3 n (n/m) C(m-3,k-2) + n^2 C(m-4,k-3)
  std::optional<BigInt> average_rhs;     // 4 n^2 C(m-4,k-3)
  std::optional<Rational> mean_count;    // average_lhs / C(m-1,k)
  std::optional<Rational> mean_bound;    // 4 n^2 C(m-4,k-3) / C(m-1,k)
  bool simplification_identity = false;  // mean_bound == 4n^2 k(k-1)(k-2)/((m-1)(m-2)(m-3))
};

PointActionReport point_action_search(const FiniteGroup& g, const PermutationAction& act, std::size_t k,
                                 const PointActionOptions& opts = {});

BigInt binomial(long long n, long long k);

}  // namespace qplab
