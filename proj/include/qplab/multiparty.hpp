#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qplab/group.hpp"
#include "qplab/rational.hpp"

namespace qplab {

/// Index set F within {1..m}, bit i-1 set for index i.
using IndexMask = std::uint32_t;

IndexMask mask_of(std::initializer_list<int> indices);
std::vector<int> indices_of(IndexMask f);
std::string mask_text(IndexMask f);  // "{1,2}"

struct Constraint {
  IndexMask f = 0;
  Subset set;
  Rational density;
};

/// A Gamma-collection of constraint sets A_F. Indices F not in Gamma carry no
/// constraint (density 1).
class DensitySystem {
 public:
  DensitySystem(std::shared_ptr<const FiniteGroup> group, int m);

  void add(IndexMask f, Subset set);

  /// Singletons {i} and pairs {i,j}, listed as sets[i-1] and pair_sets[(i,j)].
  static DensitySystem all_pairs(std::shared_ptr<const FiniteGroup> group, std::vector<Subset> singles,
                                 const std::map<std::pair<int, int>, Subset>& pairs);

  const FiniteGroup& group() const { return *group_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }
  int m() const { return m_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint* find(IndexMask f) const;
  bool is_all_pairs() const;

 private:
  std::shared_ptr<const FiniteGroup> group_;
  int m_;
  std::vector<Constraint> constraints_;  // sorted by mask
};

/// P_ij = p_i p_j p_ij prod_{k<i} p_ki p_kj (1-based i < j).
Rational density_product_pair(const DensitySystem& sys, int i, int j);

/// Sets F in Gamma of the form U ∪ V with max U < h and V in {{h}, E, {h}∪E}.
std::vector<IndexMask> density_collection(const DensitySystem& sys, int h, IndexMask e);
Rational density_product_general(const DensitySystem& sys, int h, IndexMask e);

// ---------------------------------------------------------------------------
// Threshold tables

enum class FOrigin { minimal, closed_form, user };
const char* to_string(FOrigin o) noexcept;

struct FTable {
  std::map<int, double> f;
  FOrigin origin = FOrigin::user;
  double at(int m) const;
};

/// f(2) = f2, f(m) = (sqrt(m) + sqrt(f(m-1)))^2: the equality case of
/// (1 - sqrt(m/f(m)))^2 f(m) >= f(m-1).
FTable minimal_f_table(int m_max, double f2 = 2.0);

/// f(2) = 2, f(m) = (m + 1 - f(m-1))^2 / (4m), reproduced for validation.
FTable closed_form_f_table(int m_max);

struct FCheckRow {
  int m = 0;
  double f = 0;
  double width = 0;  // m, or h(m) for general Gamma
  double lhs = 0;    // (1 - sqrt(width/f))^2 f
  double rhs = 0;    // f(m-1)
  double slack = 0;  // (lhs - rhs) / max(1, |rhs|)
  bool inequality_ok = false;
  bool above_width = false;  // f(m) > width
};

struct FValidation {
  bool f2_ok = false;
  std::vector<FCheckRow> rows;  // m = 3..m_max
  bool all_pass = false;        // f2_ok and every inequality_ok and above_width
};

/// width_override replaces m by a constant (the width h(m) of a general collection).
FValidation validate_f_table(const FTable& f, int m_max, std::optional<double> width_override = std::nullopt);

// ---------------------------------------------------------------------------
// m = 3

struct M3Hypotheses {
  std::size_t delta = 0;
  double m_const = 0;
  double threshold = 0;  // M / delta
  Rational p12, p13, p23full;  // p1p2p12, p1p3p13, p2p3p23p12p13
  bool h12 = false, h13 = false, h23 = false;
  bool all_hold = false;
  double lambda = 0;  // 2 - sqrt 2
  double mu_low = 0, mu_high = 0.5, mu = 0;
  bool mu_condition = false;      // M >= 1 / (mu lambda^2)
  bool lambda_condition = false;  // M > 1 / (1 - lambda)^2
  bool below_minimum_constant = false;  // M <= 3 + 2 sqrt 2
};

M3Hypotheses check_m3_hypotheses(const DensitySystem& sys, double m_const);

struct WitnessResult {
  std::optional<std::vector<Element>> assignment;
  std::vector<IndexMask> satisfied;
  std::uint64_t nodes = 0;
};

/// x_F = product of x_i over i in F in increasing index order.
Element ordered_product(const FiniteGroup& g, const std::vector<Element>& x, IndexMask f);
bool witness_valid(const DensitySystem& sys, const std::vector<Element>& x);

WitnessResult find_witness_m3(const DensitySystem& sys);

struct StageLog {
  bool refused = false;
  std::string reason;
  double lambda = 0, mu = 0;
  std::optional<Element> x1;
  std::size_t b2_size = 0, b3_size = 0;
  double q2 = 0, q3 = 0;  // (1 - lambda) p2 p12, (1 - lambda) p3 p13
  double final_product = 0;  // q2 q3 p23 delta
  std::size_t x1_candidates_scanned = 0;
};

struct StagedWitness {
  WitnessResult witness;
  StageLog log;
};

StagedWitness staged_witness_m3(const DensitySystem& sys, double m_const, std::optional<double> lambda = std::nullopt,
                                std::optional<double> mu = std::nullopt);

struct GammaSearchOptions {
  std::uint64_t space_cap = 100'000'000;  // product of domain sizes when m > 6
};

WitnessResult find_witness_gamma(const DensitySystem& sys, const GammaSearchOptions& opts = {});

struct GammaHypothesisEntry {
  int h = 0;
  IndexMask e = 0;
  std::vector<IndexMask> collection;
  Rational product;
  bool holds = false;
};

struct GammaHypotheses {
  std::size_t delta = 0;
  int width = 0;  // h(m): max number of F containing a fixed index
  double threshold = 0;  // f(m) / delta
  std::vector<GammaHypothesisEntry> entries;
  bool products_hold = false;
  FValidation f_check;
  bool all_hold = false;
};

GammaHypotheses check_gamma_hypotheses(const DensitySystem& sys, const FTable& f);

}  // namespace qplab
