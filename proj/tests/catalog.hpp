#pragma once

#include <string>
#include <vector>

#include "qplab/group.hpp"

namespace qplab::testing {

struct CatalogEntry {
  std::string label;
  std::string descriptor;  // empty for Q8, which comes from generators
  std::size_t order;
  std::vector<std::size_t> degrees;  // ascending
  std::size_t delta;
};

/// Textbook degree multisets.
inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"Z12", "cyclic:12", 12, std::vector<std::size_t>(12, 1), 1},
      {"S3", "symmetric:3", 6, {1, 1, 2}, 1},
      {"D4", "dihedral:4", 8, {1, 1, 1, 1, 2}, 1},
      {"Q8", "", 8, {1, 1, 1, 1, 2}, 1},
      {"A4", "alternating:4", 12, {1, 1, 1, 3}, 1},
      {"S4", "symmetric:4", 24, {1, 1, 2, 3, 3}, 1},
      {"A5", "alternating:5", 60, {1, 3, 3, 4, 5}, 3},
      {"SL(2,5)", "sl2:5", 120, {1, 2, 2, 3, 3, 4, 4, 5, 6}, 2},
      {"PSL(2,7)", "psl2:7", 168, {1, 3, 3, 6, 7, 8}, 3},
      {"PSL(2,11)", "psl2:11", 660, {1, 5, 5, 10, 10, 11, 12, 12}, 5},
      {"PSL(2,13)", "psl2:13", 1092, {1, 7, 7, 12, 12, 12, 13, 14, 14}, 7},
  };
  return entries;
}

/// Quaternion group from its regular representation on {±1, ±i, ±j, ±k}.
/// Points: 0=1 1=i 2=j 3=k 4=-1 5=-i 6=-j 7=-k; generators are left
/// multiplication by i and j.
inline FiniteGroup quaternion_group() {
  const std::vector<Permutation> gens = {
      {1, 4, 3, 6, 5, 0, 7, 2},  // i*: 1->i, i->-1, j->k, k->-j
      {2, 7, 4, 1, 6, 3, 0, 5},  // j*: 1->j, i->-k, j->-1, k->i
  };
  return from_generators(gens).first;
}

inline FiniteGroup catalog_group(const CatalogEntry& e) {
  return e.descriptor.empty() ? quaternion_group() : build_named(e.descriptor);
}

}  // namespace qplab::testing
