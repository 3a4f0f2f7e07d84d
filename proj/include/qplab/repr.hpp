#pragma once

#include <cstdint>
#include <vector>

#include "qplab/group.hpp"

namespace qplab {

/// Dense k x k integer matrix, row-major.
struct ClassMatrix {
  std::size_t k = 0;
  std::vector<std::int64_t> a;
  std::int64_t operator()(std::size_t r, std::size_t c) const { return a[r * k + c]; }
};

/// (M_i)(j, l) = #{(a, b) : a in C_i, b in C_j, a*b = c_l} for the fixed
/// representative c_l of class l. The M_i commute pairwise.
std::vector<ClassMatrix> class_matrices(const FiniteGroup& g, const ConjugacyPartition& p);

struct CharacterDegreeTable {
  std::vector<std::size_t> degrees;  // ascending
  std::size_t delta = 0;
  double residual = 0;  // max |d - round(d)| before rounding
  double eigen_residual = 0;  // max ||M_i w - omega_i w|| / ||w||
  std::uint64_t seed_used = 0;
};

struct DegreeOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double tolerance = 1e-6;
};

/// Degrees of the irreducible characters from a simultaneous
/// eigendecomposition of the class matrices. Throws Error(numeric) when every
/// seed in the schedule yields a degenerate diagonalization.
CharacterDegreeTable character_degrees(const FiniteGroup& g, const DegreeOptions& opts = {});

/// Smallest degree of a nontrivial irreducible representation. Cached in
/// process by group hash.
std::size_t delta(const FiniteGroup& g);

}  // namespace qplab
