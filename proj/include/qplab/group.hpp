#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qplab/budget.hpp"
#include "qplab/subset.hpp"

namespace qplab {

/// One-line image notation: p[x] is the image of point x.
using Permutation = std::vector<std::uint32_t>;

enum class Validation { full, sampled };

struct GroupLimits {
  std::size_t order_cap = 2000;
  /// Above this order associativity is checked on a generating set plus
  /// random triples rather than exhaustively.
  std::size_t full_validation_cap = 512;
  std::uint64_t sampled_triples = 1'000'000;
};

/// Outcome of validating a raw multiplication table.
struct TableCheck {
  bool ok = true;
  std::string failure;  // first failure, human readable
  bool identity_ok = true;
  bool latin_ok = true;
  bool inverses_ok = true;
  bool associative_ok = true;
  std::optional<std::array<Element, 3>> associativity_witness;
  Validation validation = Validation::full;
};

/// Finite group as a dense multiplication table. Element 0 is the identity.
/// Immutable after construction.
class FiniteGroup {
 public:
  /// Validates the table (identity at 0, Latin rows/columns, associativity)
  /// and throws Error(not_a_group) on failure.
  static FiniteGroup from_table(std::size_t n, std::vector<Element> table, std::string name = {},
                                const GroupLimits& limits = {});

  /// Validation without throwing; used by `group validate`.
  static TableCheck check_table(std::size_t n, std::span<const Element> table,
                                const GroupLimits& limits = {});

  std::size_t order() const noexcept { return n_; }
  Element mul(Element a, Element b) const noexcept { return table_[a * n_ + b]; }
  Element inv(Element a) const noexcept { return inv_[a]; }
  std::span<const Element> row(Element a) const noexcept { return {table_.data() + a * n_, n_}; }
  std::span<const Element> table() const noexcept { return table_; }

  const std::string& name() const noexcept { return name_; }
  std::uint64_t hash() const noexcept { return hash_; }
  std::string hash_hex() const;
  Validation validation() const noexcept { return validation_; }

  /// Faithful permutation representation, when the group was built from one
  /// (symmetric/alternating families, from_generators).
  const std::vector<Permutation>& permutations() const noexcept { return perms_; }
  void attach_permutations(std::vector<Permutation> perms);

  std::size_t element_order(Element a) const;
  bool is_abelian() const;

 private:
  std::size_t n_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inv_;
  std::string name_;
  std::uint64_t hash_ = 0;
  Validation validation_ = Validation::full;
  std::vector<Permutation> perms_;
};

/// Transitive-or-not action of G on points {0..m-1}. image[g*m + x] = g(x).
struct PermutationAction {
  std::size_t degree = 0;
  std::vector<std::uint32_t> image;
  bool transitive = false;

  std::uint32_t apply(Element g, std::uint32_t point) const noexcept { return image[g * degree + point]; }
};

struct SubgroupRecord {
  Subset elements;
  std::size_t order = 0;
  std::size_t index = 0;
  /// Smallest element of each left coset xH, ascending; coset 0 is H.
  std::vector<Element> coset_reps;
  std::vector<std::uint32_t> coset_of;
};

struct ConjugacyPartition {
  std::vector<std::vector<Element>> classes;
  std::vector<std::uint32_t> class_of;
  std::vector<std::size_t> sizes;
};

struct SubgroupLattice {
  std::vector<SubgroupRecord> subgroups;  // sorted by (order, elements lex)
  std::optional<std::size_t> min_index;   // nullopt = unknown
  bool exact = false;
  std::uint64_t closures = 0;
};

// ---------------------------------------------------------------------------
// Construction

/// Family descriptors: cyclic:k, dihedral:k (order 2k), symmetric:k,
/// alternating:k, sl2:q, psl2:q, product(<spec>,<spec>).
FiniteGroup build_named(std::string_view spec, const GroupLimits& limits = {});

/// Breadth-first closure of the generators under composition. Element 0 is
/// the identity; the natural degree-d action is returned alongside.
std::pair<FiniteGroup, PermutationAction> from_generators(std::span<const Permutation> generators,
                                                          const GroupLimits& limits = {});

/// Composition (a*b)(x) = a(b(x)); matches image[mul(a,b)] = image[a] o image[b].
Permutation compose(const Permutation& a, const Permutation& b);
bool is_permutation(std::span<const std::uint32_t> p);

// ---------------------------------------------------------------------------
// Structure

ConjugacyPartition conjugacy_classes(const FiniteGroup& g);

/// Smallest subgroup containing the given elements.
Subset subgroup_closure(const FiniteGroup& g, std::span<const Element> generators);

/// Validates closure and builds the left-coset bookkeeping.
SubgroupRecord make_subgroup(const FiniteGroup& g, const Subset& elements);

struct SubgroupOptions {
  std::size_t enumeration_cap = 200;
  SearchBudget budget{};
};

/// All subgroups (exact mode) and the minimal proper-subgroup index m.
SubgroupLattice subgroups_and_min_index(const FiniteGroup& g, const SubgroupOptions& opts = {});

// ---------------------------------------------------------------------------
// Actions

PermutationAction regular_action(const FiniteGroup& g);
/// Action from the attached permutation representation; throws if none.
PermutationAction natural_action(const FiniteGroup& g);
/// Left multiplication on left cosets xH; point 0 is H itself.
PermutationAction coset_action(const FiniteGroup& g, const SubgroupRecord& h);
SubgroupRecord point_stabilizer(const FiniteGroup& g, const PermutationAction& act, std::uint32_t point);

bool orbit_is_everything(const PermutationAction& act, std::size_t group_order);

}  // namespace qplab
