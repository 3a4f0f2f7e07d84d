#include "qplab/multiparty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qplab/error.hpp"
#include "qplab/repr.hpp"

namespace qplab {

namespace {

constexpr double kBoundaryRel = 1e-12;

bool at_least(const Rational& value, double threshold) {
  return to_double(value) >= threshold * (1.0 - kBoundaryRel);
}

}  // namespace

IndexMask mask_of(std::initializer_list<int> indices) {
  IndexMask f = 0;
  for (int i : indices) f |= IndexMask{1} << (i - 1);
  return f;
}

std::vector<int> indices_of(IndexMask f) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (f >> i & 1u) out.push_back(i + 1);
  return out;
}

std::string mask_text(IndexMask f) {
  std::string s = "{";
  bool first = true;
  for (int i : indices_of(f)) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

DensitySystem::DensitySystem(std::shared_ptr<const FiniteGroup> group, int m) : group_(std::move(group)), m_(m) {
  if (!group_) throw Error(ErrorCode::invalid_argument, "density system needs a group");
  if (m < 1 || m > 31) throw Error(ErrorCode::invalid_argument, "number of variables must be in 1..31");
}

void DensitySystem::add(IndexMask f, Subset set) {
  if (f == 0) throw Error(ErrorCode::invalid_argument, "constraint index set must be nonempty");
  if (f >> m_ != 0) throw Error(ErrorCode::invalid_argument, "constraint " + mask_text(f) + " uses an index above m");
  if (set.universe() != group_->order()) throw Error(ErrorCode::invalid_argument, "constraint set universe mismatch");
  if (find(f)) throw Error(ErrorCode::invalid_argument, "duplicate constraint " + mask_text(f));
  const auto n = static_cast<long long>(group_->order());
  Constraint c{f, std::move(set), {}};
  c.density = Rational(static_cast<long long>(c.set.count()), n);
  const auto pos = std::lower_bound(constraints_.begin(), constraints_.end(), f,
                                    [](const Constraint& a, IndexMask b) { return a.f < b; });
  constraints_.insert(pos, std::move(c));
}

DensitySystem DensitySystem::all_pairs(std::shared_ptr<const FiniteGroup> group, std::vector<Subset> singles,
                                       const std::map<std::pair<int, int>, Subset>& pairs) {
  DensitySystem sys(std::move(group), static_cast<int>(singles.size()));
  for (int i = 1; i <= sys.m(); ++i) sys.add(mask_of({i}), std::move(singles[static_cast<std::size_t>(i - 1)]));
  for (int i = 1; i <= sys.m(); ++i)
    for (int j = i + 1; j <= sys.m(); ++j) {
      auto it = pairs.find({i, j});
      if (it == pairs.end())
        throw Error(ErrorCode::invalid_argument, "missing pair set " + mask_text(mask_of({i, j})));
      sys.add(mask_of({i, j}), it->second);
    }
  return sys;
}

const Constraint* DensitySystem::find(IndexMask f) const {
  const auto it = std::lower_bound(constraints_.begin(), constraints_.end(), f,
                                   [](const Constraint& a, IndexMask b) { return a.f < b; });
  return it != constraints_.end() && it->f == f ? &*it : nullptr;
}

bool DensitySystem::is_all_pairs() const {
  for (int i = 1; i <= m_; ++i) {
    if (!find(mask_of({i}))) return false;
    for (int j = i + 1; j <= m_; ++j)
      if (!find(mask_of({i, j}))) return false;
  }
  return constraints_.size() == static_cast<std::size_t>(m_ + m_ * (m_ - 1) / 2);
}

namespace {

const Rational& density_of(const DensitySystem& sys, IndexMask f) {
  const Constraint* c = sys.find(f);
  if (!c) throw Error(ErrorCode::invalid_argument, "missing set for F = " + mask_text(f));
  return c->density;
}

}  // namespace

Rational density_product_pair(const DensitySystem& sys, int i, int j) {
  if (!(1 <= i && i < j && j <= sys.m())) throw Error(ErrorCode::invalid_argument, "need 1 <= i < j <= m");
  Rational p = density_of(sys, mask_of({i})) * density_of(sys, mask_of({j})) * density_of(sys, mask_of({i, j}));
  for (int k = 1; k < i; ++k) p *= density_of(sys, mask_of({k, i})) * density_of(sys, mask_of({k, j}));
  return p;
}

std::vector<IndexMask> density_collection(const DensitySystem& sys, int h, IndexMask e) {
  if (!(1 <= h && h < sys.m())) throw Error(ErrorCode::invalid_argument, "need 1 <= h < m");
  const IndexMask below = (IndexMask{1} << (h - 1)) - 1;  // indices 1..h-1
  if (e & (below | (IndexMask{1} << (h - 1))))
    throw Error(ErrorCode::invalid_argument, "E must be a subset of {h+1..m}");
  const IndexMask hbit = IndexMask{1} << (h - 1);
  std::vector<IndexMask> out;
  for (const auto& c : sys.constraints()) {
    const IndexMask upper = c.f & ~below;
    if (upper == hbit || upper == e || upper == (hbit | e)) out.push_back(c.f);
  }
  return out;
}

Rational density_product_general(const DensitySystem& sys, int h, IndexMask e) {
  Rational p = 1;
  for (IndexMask f : density_collection(sys, h, e)) p *= sys.find(f)->density;
  return p;
}

// ---------------------------------------------------------------------------

const char* to_string(FOrigin o) noexcept {
  switch (o) {
    case FOrigin::minimal: return "minimal";
    case FOrigin::closed_form: return "closed_form";
    case FOrigin::user: return "user";
  }
  return "unknown";
}

double FTable::at(int m) const {
  auto it = f.find(m);
  if (it == f.end()) throw Error(ErrorCode::invalid_argument, "f-table has no value for m = " + std::to_string(m));
  return it->second;
}

FTable minimal_f_table(int m_max, double f2) {
  if (m_max < 2) throw Error(ErrorCode::invalid_argument, "m_max must be at least 2");
  if (!(f2 > 1.0)) throw Error(ErrorCode::invalid_argument, "f(2) must exceed 1");
  FTable t;
  t.origin = FOrigin::minimal;
  t.f[2] = f2;
  for (int m = 3; m <= m_max; ++m) {
    const double root = std::sqrt(static_cast<double>(m)) + std::sqrt(t.f[m - 1]);
    t.f[m] = root * root;
  }
  return t;
}

FTable closed_form_f_table(int m_max) {
  if (m_max < 2) throw Error(ErrorCode::invalid_argument, "m_max must be at least 2");
  FTable t;
  t.origin = FOrigin::closed_form;
  t.f[2] = 2.0;
  for (int m = 3; m <= m_max; ++m) {
    const double d = static_cast<double>(m) + 1.0 - t.f[m - 1];
    t.f[m] = d * d / (4.0 * m);
  }
  return t;
}

FValidation validate_f_table(const FTable& f, int m_max, std::optional<double> width_override) {
  FValidation v;
  v.f2_ok = f.at(2) > 1.0;
  bool all = v.f2_ok;
  for (int m = 3; m <= m_max; ++m) {
    FCheckRow row;
    row.m = m;
    row.f = f.at(m);
    row.width = width_override.value_or(static_cast<double>(m));
    row.rhs = f.at(m - 1);
    const double shrink = row.f > 0 ? 1.0 - std::sqrt(row.width / row.f) : -INFINITY;
    row.lhs = std::isfinite(shrink) ? shrink * shrink * row.f : 0.0;
    row.slack = (row.lhs - row.rhs) / std::max(1.0, std::abs(row.rhs));
    row.inequality_ok = row.slack >= -1e-9;
    row.above_width = row.f > row.width;
    all = all && row.inequality_ok && row.above_width;
    v.rows.push_back(row);
  }
  v.all_pass = all;
  return v;
}

// ---------------------------------------------------------------------------

M3Hypotheses check_m3_hypotheses(const DensitySystem& sys, double m_const) {
  if (sys.m() != 3) throw Error(ErrorCode::invalid_argument, "m = 3 hypotheses need a 3-variable system");
  M3Hypotheses h;
  h.delta = delta(sys.group());
  h.m_const = m_const;
  h.threshold = m_const / static_cast<double>(h.delta);
  h.p12 = density_product_pair(sys, 1, 2);
  h.p13 = density_product_pair(sys, 1, 3);
  h.p23full = density_product_pair(sys, 2, 3);
  h.h12 = at_least(h.p12, h.threshold);
  h.h13 = at_least(h.p13, h.threshold);
  h.h23 = at_least(h.p23full, h.threshold);
  h.all_hold = h.h12 && h.h13 && h.h23;
  const double minimum_constant = 3.0 + 2.0 * std::sqrt(2.0);
  h.lambda = 2.0 - std::sqrt(2.0);
  h.mu_low = minimum_constant / (2.0 * m_const);
  h.mu_high = 0.5;
  h.mu = 0.5 * (h.mu_low + h.mu_high);
  h.mu_condition = m_const >= 1.0 / (h.mu * h.lambda * h.lambda);
  h.lambda_condition = m_const > 1.0 / ((1.0 - h.lambda) * (1.0 - h.lambda));
  h.below_minimum_constant = m_const <= minimum_constant;
  return h;
}

Element ordered_product(const FiniteGroup& g, const std::vector<Element>& x, IndexMask f) {
  Element p = 0;
  for (int i : indices_of(f)) p = g.mul(p, x[static_cast<std::size_t>(i - 1)]);
  return p;
}

bool witness_valid(const DensitySystem& sys, const std::vector<Element>& x) {
  if (x.size() != static_cast<std::size_t>(sys.m())) return false;
  for (const auto& c : sys.constraints())
    if (!c.set.test(ordered_product(sys.group(), x, c.f))) return false;
  return true;
}

namespace {

const Subset& set_of(const DensitySystem& sys, IndexMask f) {
  const Constraint* c = sys.find(f);
  if (!c) throw Error(ErrorCode::invalid_argument, "missing set for F = " + mask_text(f));
  return c->set;
}

std::vector<IndexMask> all_masks(const DensitySystem& sys) {
  std::vector<IndexMask> out;
  for (const auto& c : sys.constraints()) out.push_back(c.f);
  return out;
}

// {y in A : x y in target}
std::vector<Element> restricted(const FiniteGroup& g, Element x, const Subset& a, const Subset& target) {
  std::vector<Element> out;
  const auto row = g.row(x);
  a.for_each([&](Element y) {
    if (target.test(row[y])) out.push_back(y);
  });
  return out;
}

}  // namespace

WitnessResult find_witness_m3(const DensitySystem& sys) {
  if (sys.m() != 3) throw Error(ErrorCode::invalid_argument, "m = 3 witness search needs a 3-variable system");
  const auto& g = sys.group();
  const Subset& a1 = set_of(sys, mask_of({1}));
  const Subset& a2 = set_of(sys, mask_of({2}));
  const Subset& a3 = set_of(sys, mask_of({3}));
  const Subset& a12 = set_of(sys, mask_of({1, 2}));
  const Subset& a13 = set_of(sys, mask_of({1, 3}));
  const Subset& a23 = set_of(sys, mask_of({2, 3}));
  WitnessResult res;
  for (Element x1 : a1.elements()) {
    ++res.nodes;
    const auto b2 = restricted(g, x1, a2, a12);
    if (b2.empty()) continue;
    const auto b3 = restricted(g, x1, a3, a13);
    for (Element x2 : b2) {
      ++res.nodes;
      const auto row = g.row(x2);
      for (Element x3 : b3) {
        if (a23.test(row[x3])) {
          res.assignment = std::vector<Element>{x1, x2, x3};
          res.satisfied = all_masks(sys);
          return res;
        }
      }
    }
  }
  return res;
}

StagedWitness staged_witness_m3(const DensitySystem& sys, double m_const, std::optional<double> lambda,
                                std::optional<double> mu) {
  StagedWitness out;
  const auto hyp = check_m3_hypotheses(sys, m_const);
  out.log.lambda = lambda.value_or(hyp.lambda);
  out.log.mu = mu.value_or(hyp.mu);
  if (!hyp.all_hold) {
    out.log.refused = true;
    out.log.reason = "density-product hypotheses fail; use the exhaustive search";
    return out;
  }
  const auto& g = sys.group();
  const double n = static_cast<double>(g.order());
  const auto d = [&](IndexMask f) { return to_double(sys.find(f)->density); };
  out.log.q2 = (1.0 - out.log.lambda) * d(mask_of({2})) * d(mask_of({1, 2}));
  out.log.q3 = (1.0 - out.log.lambda) * d(mask_of({3})) * d(mask_of({1, 3}));
  out.log.final_product = out.log.q2 * out.log.q3 * d(mask_of({2, 3})) * static_cast<double>(hyp.delta);

  const Subset& a23 = set_of(sys, mask_of({2, 3}));
  for (Element x1 : set_of(sys, mask_of({1})).elements()) {
    ++out.witness.nodes;
    ++out.log.x1_candidates_scanned;
    auto b2 = restricted(g, x1, set_of(sys, mask_of({2})), set_of(sys, mask_of({1, 2})));
    auto b3 = restricted(g, x1, set_of(sys, mask_of({3})), set_of(sys, mask_of({1, 3})));
    if (static_cast<double>(b2.size()) <= out.log.q2 * n || static_cast<double>(b3.size()) <= out.log.q3 * n) continue;
    out.log.x1 = x1;
    out.log.b2_size = b2.size();
    out.log.b3_size = b3.size();
    for (Element y2 : b2) {
      const auto row = g.row(y2);
      for (Element y3 : b3) {
        ++out.witness.nodes;
        if (a23.test(row[y3])) {
          out.witness.assignment = std::vector<Element>{x1, y2, y3};
          out.witness.satisfied = all_masks(sys);
          return out;
        }
      }
    }
    break;  // the staged argument commits to the first good x1
  }
  return out;
}

WitnessResult find_witness_gamma(const DensitySystem& sys, const GammaSearchOptions& opts) {
  const auto& g = sys.group();
  const int m = sys.m();
  const Subset full = Subset::full(g.order());
  std::vector<std::vector<Element>> domain(static_cast<std::size_t>(m));
  double space = 1;
  for (int i = 1; i <= m; ++i) {
    const Constraint* c = sys.find(mask_of({i}));
    domain[static_cast<std::size_t>(i - 1)] = (c ? c->set : full).elements();
    space *= static_cast<double>(domain[static_cast<std::size_t>(i - 1)].size());
  }
  if (m > 6 && space > static_cast<double>(opts.space_cap))
    throw Error(ErrorCode::cap_exceeded, "witness search space exceeds cap");

  // Constraints checked once their largest index is assigned.
  std::vector<std::vector<const Constraint*>> closing(static_cast<std::size_t>(m));
  for (const auto& c : sys.constraints())
    closing[static_cast<std::size_t>(31 - std::countl_zero(c.f))].push_back(&c);

  WitnessResult res;
  std::vector<Element> x(static_cast<std::size_t>(m), 0);
  auto dfs = [&](auto&& self, int depth) -> bool {
    if (depth == m) return true;
    const auto d = static_cast<std::size_t>(depth);
    for (Element v : domain[d]) {
      ++res.nodes;
      x[d] = v;
      bool ok = true;
      for (const Constraint* c : closing[d])
        if (!c->set.test(ordered_product(g, x, c->f))) {
          ok = false;
          break;
        }
      if (ok && self(self, depth + 1)) return true;
    }
    return false;
  };
  if (dfs(dfs, 0)) {
    res.assignment = x;
    res.satisfied = all_masks(sys);
  }
  return res;
}

GammaHypotheses check_gamma_hypotheses(const DensitySystem& sys, const FTable& f) {
  GammaHypotheses out;
  const int m = sys.m();
  out.delta = delta(sys.group());
  for (int k = 1; k <= m; ++k) {
    int c = 0;
    for (const auto& con : sys.constraints()) c += (con.f >> (k - 1)) & 1u;
    out.width = std::max(out.width, c);
  }
  if (m < 2) {
    out.products_hold = true;
    out.f_check.f2_ok = true;
    out.f_check.all_pass = true;
    out.all_hold = true;
    return out;
  }
  out.threshold = f.at(m) / static_cast<double>(out.delta);
  bool all = true;
  for (int h = 1; h < m; ++h) {
    const IndexMask upper = ((IndexMask{1} << m) - 1) & ~((IndexMask{1} << h) - 1);  // {h+1..m}
    for (IndexMask e = upper; e != 0; e = (e - 1) & upper) {
      GammaHypothesisEntry entry;
      entry.h = h;
      entry.e = e;
      entry.collection = density_collection(sys, h, e);
      if (entry.collection.empty()) continue;
      entry.product = 1;
      for (IndexMask fm : entry.collection) entry.product *= sys.find(fm)->density;
      entry.holds = at_least(entry.product, out.threshold);
      all = all && entry.holds;
      out.entries.push_back(std::move(entry));
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.h != b.h ? a.h < b.h : a.e < b.e; });
  out.products_hold = all;
  out.f_check = validate_f_table(f, m, static_cast<double>(out.width));
  out.all_hold = out.products_hold && out.f_check.all_pass;
  return out;
}

}  // namespace qplab
