#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qplab/eigen.hpp"
#include "qplab/group.hpp"

namespace qplab {

/// Bipartite Cayley graph incidence: entry (x, y) = 1 iff y * x^-1 is in A.
struct IncidenceMatrix {
  Subset set;
  std::size_t n = 0;
  std::vector<std::uint8_t> entries;  // row-major n x n
  std::uint8_t operator()(Element x, Element y) const { return entries[x * n + y]; }
};

IncidenceMatrix incidence(const FiniteGroup& g, const Subset& a);

/// M = N N^T built directly: M(x, x') = #{a in A : a * x * x'^-1 in A}.
SymmetricMatrix gram_matrix(const FiniteGroup& g, const Subset& a);

struct SpectralOptions {
  std::size_t cap = 1200;
  EigenOptions eigen{};
};

struct SpectralReport {
  std::size_t n = 0;
  std::size_t set_size = 0;
  std::size_t delta = 0;
  double sigma_max = 0;
  std::vector<double> eigenvalues;  // of M, descending
  double lambda2 = 0;
  double trace = 0;
  double bound = 0;  // n |A| / delta
  bool bound_holds = false;
  EigenMethod method = EigenMethod::jacobi;
};

SpectralReport spectral_report(const FiniteGroup& g, const Subset& a, const SpectralOptions& opts = {});

struct TripleBoundReport {
  bool applicable = true;  // false when ab = c has solutions
  std::uint64_t solutions = 0;
  double product = 0;  // |A||B||C|
  double lambda2 = 0;
  double spectral_rhs = 0;  // n^2 lambda2 / |A|
  double delta_rhs = 0;  // n^3 / delta
  bool spectral_holds = false;
  bool delta_holds = false;
};

TripleBoundReport check_triple_bound(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c,
                                     const SpectralOptions& opts = {});
/// Same check with a precomputed spectral report for A.
TripleBoundReport check_triple_bound(const FiniteGroup& g, const SpectralReport& spec_a, const Subset& a,
                                     const Subset& b, const Subset& c);

struct IntersectionProfile {
  std::vector<std::size_t> values;           // |A ∩ xB| indexed by x
  std::map<std::size_t, std::size_t> histogram;
  std::uint64_t total = 0;                   // sum over x, equals |A||B|
  double mean = 0;
  bool identity_holds = false;
};

IntersectionProfile intersection_profile(const FiniteGroup& g, const Subset& a, const Subset& b);

struct TranslateReport {
  double r = 0, s = 0;
  double gamma = 0, t = 0;
  double hypothesis_lhs = 0;  // r s t
  double hypothesis_rhs = 0;  // 1 / (gamma^2 delta)
  bool hypothesis_holds = false;
  double threshold = 0;  // (1 - gamma) r s n
  std::size_t bad_count = 0;
  double allowed = 0;  // t n
  bool conclusion_holds = false;
  std::size_t delta = 0;
};

TranslateReport check_bad_translates(const FiniteGroup& g, const Subset& a, const Subset& b, double gamma, double t);

}  // namespace qplab
