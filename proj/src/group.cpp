#include "qplab/group.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>

#include "qplab/error.hpp"
#include "qplab/rng.hpp"

namespace qplab {

namespace {

std::uint64_t table_hash(std::size_t n, std::span<const Element> table) {
  std::uint64_t h = 1469598103934665603ULL;
  auto byte = [&](unsigned b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) byte(static_cast<unsigned>((std::uint64_t{n} >> (8 * i)) & 0xff));
  for (Element v : table)
    for (int i = 0; i < 4; ++i) byte((v >> (8 * i)) & 0xff);
  return h;
}

std::string triple_text(Element a, Element b, Element c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

// Greedy generating set: scan elements in index order, keep those outside the
// subgroup generated so far.
std::vector<Element> greedy_generators(std::size_t n, std::span<const Element> t) {
  std::vector<Element> gens;
  std::vector<char> in(n, 0);
  in[0] = 1;
  std::size_t covered = 1;
  for (Element x = 1; x < n && covered < n; ++x) {
    if (in[x]) continue;
    gens.push_back(x);
    // Re-close from scratch with the enlarged generating set.
    std::fill(in.begin(), in.end(), 0);
    std::vector<Element> queue{0};
    in[0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      for (Element s : gens) {
        const Element y = t[queue[qi] * n + s];
        if (!in[y]) {
          in[y] = 1;
          queue.push_back(y);
        }
      }
    }
    covered = queue.size();
  }
  return gens;
}

}  // namespace

TableCheck FiniteGroup::check_table(std::size_t n, std::span<const Element> t, const GroupLimits& limits) {
  TableCheck r;
  auto fail = [&](std::string msg) {
    if (r.ok) r.failure = std::move(msg);
    r.ok = false;
  };
  if (n == 0 || t.size() != n * n) {
    r.latin_ok = false;
    fail("table size does not match order");
    return r;
  }
  for (Element v : t)
    if (v >= n) {
      r.latin_ok = false;
      fail("table entry " + std::to_string(v) + " out of range");
      return r;
    }
  for (Element x = 0; x < n; ++x)
    if (t[x] != x || t[x * n] != x) {
      r.identity_ok = false;
      fail("identity not index 0");
      break;
    }
  std::vector<char> seen(n);
  for (Element a = 0; a < n && r.latin_ok; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Element b = 0; b < n; ++b) {
      if (seen[t[a * n + b]]++) {
        r.latin_ok = false;
        fail("row " + std::to_string(a) + " is not a permutation");
        break;
      }
    }
  }
  for (Element b = 0; b < n && r.latin_ok; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Element a = 0; a < n; ++a) {
      if (seen[t[a * n + b]]++) {
        r.latin_ok = false;
        fail("column " + std::to_string(b) + " is not a permutation");
        break;
      }
    }
  }
  if (!r.latin_ok || !r.identity_ok) {
    r.inverses_ok = false;
    r.associative_ok = false;
    return r;
  }
  // Latin + identity at 0 gives two-sided inverses only with associativity;
  // check the two-sided law explicitly.
  for (Element x = 0; x < n; ++x) {
    Element y = 0;
    while (t[x * n + y] != 0) ++y;
    if (t[y * n + x] != 0) {
      r.inverses_ok = false;
      fail("element " + std::to_string(x) + " has no two-sided inverse");
      break;
    }
  }
  auto assoc = [&](Element a, Element b, Element c) {
    return t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]];
  };
  if (n <= limits.full_validation_cap) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c)
          if (!assoc(a, b, c)) {
            r.associative_ok = false;
            r.associativity_witness = std::array<Element, 3>{a, b, c};
            fail("associativity fails at " + triple_text(a, b, c));
            return r;
          }
    return r;
  }
  // Light's test: if (ab)g = a(bg) for all a, b and every g in a generating
  // set, the set of such g is closed under products, so it is all of G.
  r.validation = Validation::sampled;
  for (Element g : greedy_generators(n, t))
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (!assoc(a, b, g)) {
          r.associative_ok = false;
          r.associativity_witness = std::array<Element, 3>{a, b, g};
          fail("associativity fails at " + triple_text(a, b, g));
          return r;
        }
  Rng rng(kDefaultSeed);
  for (std::uint64_t i = 0; i < limits.sampled_triples; ++i) {
    const auto a = static_cast<Element>(rng.below(n));
    const auto b = static_cast<Element>(rng.below(n));
    const auto c = static_cast<Element>(rng.below(n));
    if (!assoc(a, b, c)) {
      r.associative_ok = false;
      r.associativity_witness = std::array<Element, 3>{a, b, c};
      fail("associativity fails at " + triple_text(a, b, c));
      return r;
    }
  }
  return r;
}

FiniteGroup FiniteGroup::from_table(std::size_t n, std::vector<Element> table, std::string name,
                                    const GroupLimits& limits) {
  if (n > limits.order_cap)
    throw Error(ErrorCode::cap_exceeded,
                "group order " + std::to_string(n) + " exceeds cap " + std::to_string(limits.order_cap));
  const TableCheck check = check_table(n, table, limits);
  if (!check.ok) throw Error(ErrorCode::not_a_group, check.failure);

  FiniteGroup g;
  g.n_ = n;
  g.table_ = std::move(table);
  g.inv_.resize(n);
  for (Element x = 0; x < n; ++x) {
    const auto row = g.row(x);
    g.inv_[x] = static_cast<Element>(std::find(row.begin(), row.end(), Element{0}) - row.begin());
  }
  g.name_ = std::move(name);
  g.hash_ = table_hash(n, g.table_);
  g.validation_ = check.validation;
  return g;
}

std::string FiniteGroup::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

void FiniteGroup::attach_permutations(std::vector<Permutation> perms) {
  if (perms.size() != n_) throw Error(ErrorCode::invalid_argument, "permutation list size mismatch");
  perms_ = std::move(perms);
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (Element a = 0; a < n_; ++a)
    for (Element b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) c[x] = a[b[x]];
  return c;
}

bool is_permutation(std::span<const std::uint32_t> p) {
  std::vector<char> seen(p.size(), 0);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// ---------------------------------------------------------------------------

ConjugacyPartition conjugacy_classes(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::uint32_t> raw(n, UINT32_MAX);
  std::vector<std::vector<Element>> classes;
  for (Element x = 0; x < n; ++x) {
    if (raw[x] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(classes.size());
    std::vector<Element> cls;
    for (Element h = 0; h < n; ++h) {
      const Element y = g.mul(g.mul(h, x), g.inv(h));
      if (raw[y] == UINT32_MAX) {
        raw[y] = id;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });
  ConjugacyPartition p;
  p.class_of.assign(n, 0);
  for (std::uint32_t i = 0; i < classes.size(); ++i) {
    for (Element x : classes[i]) p.class_of[x] = i;
    p.sizes.push_back(classes[i].size());
  }
  p.classes = std::move(classes);
  return p;
}

Subset subgroup_closure(const FiniteGroup& g, std::span<const Element> generators) {
  Subset in(g.order());
  std::vector<Element> queue{0};
  in.set(0);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (Element s : generators) {
      const Element y = g.mul(queue[qi], s);
      if (!in.test(y)) {
        in.set(y);
        queue.push_back(y);
      }
    }
  }
  return in;
}

SubgroupRecord make_subgroup(const FiniteGroup& g, const Subset& elements) {
  const std::size_t n = g.order();
  if (elements.universe() != n) throw Error(ErrorCode::invalid_argument, "subset universe differs from group order");
  if (!elements.test(0)) throw Error(ErrorCode::invalid_argument, "subgroup must contain the identity");
  const auto members = elements.elements();
  for (Element a : members) {
    if (!elements.test(g.inv(a))) throw Error(ErrorCode::invalid_argument, "subset not closed under inverses");
    for (Element b : members)
      if (!elements.test(g.mul(a, b))) throw Error(ErrorCode::invalid_argument, "subset not closed under products");
  }
  SubgroupRecord rec;
  rec.elements = elements;
  rec.order = members.size();
  rec.index = n / rec.order;
  rec.coset_of.assign(n, UINT32_MAX);
  for (Element x = 0; x < n; ++x) {
    if (rec.coset_of[x] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(rec.coset_reps.size());
    rec.coset_reps.push_back(x);  // smallest in its coset since we scan ascending
    for (Element h : members) rec.coset_of[g.mul(x, h)] = id;
  }
  return rec;
}

SubgroupLattice subgroups_and_min_index(const FiniteGroup& g, const SubgroupOptions& opts) {
  const std::size_t n = g.order();
  SubgroupLattice lat;
  BudgetMeter meter(opts.budget);

  struct Found {
    Subset set;
    std::vector<Element> gens;
  };
  std::vector<Found> found;
  auto known = [&](const Subset& s) {
    return std::any_of(found.begin(), found.end(), [&](const Found& f) { return f.set == s; });
  };

  // Cyclic subgroups, one generator each.
  std::vector<std::size_t> cyclic;
  for (Element x = 0; x < n; ++x) {
    meter.tick();
    Element gen[1] = {x};
    Subset s = subgroup_closure(g, gen);
    if (!known(s)) {
      cyclic.push_back(found.size());
      found.push_back({std::move(s), x == 0 ? std::vector<Element>{} : std::vector<Element>{x}});
    }
  }

  bool complete = n <= opts.enumeration_cap;
  if (complete) {
    // Join every found subgroup with every cyclic subgroup until fixpoint.
    // Every subgroup is the join of its cyclic subgroups, so this is exact.
    for (std::size_t i = 0; i < found.size() && !meter.exhausted(); ++i) {
      for (std::size_t c : cyclic) {
        if (c >= found.size() || found[c].gens.empty()) continue;
        const Element z = found[c].gens.front();
        if (found[i].set.test(z)) continue;
        if (!meter.tick()) break;
        std::vector<Element> gens = found[i].gens;
        gens.push_back(z);
        Subset s = subgroup_closure(g, gens);
        if (!known(s)) found.push_back({std::move(s), std::move(gens)});
      }
    }
    if (meter.exhausted()) complete = false;
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    const auto ca = a.set.count(), cb = b.set.count();
    return ca != cb ? ca < cb : a.set.lex_less(b.set);
  });
  for (const auto& f : found) lat.subgroups.push_back(make_subgroup(g, f.set));
  lat.closures = meter.nodes();
  lat.exact = complete;
  if (complete) {
    if (n == 1) {
      lat.min_index = std::nullopt;  // no proper subgroup
    } else {
      std::size_t largest = 0;
      for (const auto& h : lat.subgroups)
        if (h.order < n) largest = std::max(largest, h.order);
      lat.min_index = n / largest;
    }
  }
  return lat;
}

// ---------------------------------------------------------------------------

bool orbit_is_everything(const PermutationAction& act, std::size_t group_order) {
  if (act.degree == 0) return false;
  std::vector<char> seen(act.degree, 0);
  std::size_t count = 0;
  for (Element g = 0; g < group_order; ++g) {
    const auto y = act.apply(g, 0);
    if (!seen[y]) {
      seen[y] = 1;
      ++count;
    }
  }
  return count == act.degree;
}

PermutationAction regular_action(const FiniteGroup& g) {
  PermutationAction act;
  act.degree = g.order();
  act.image.assign(g.table().begin(), g.table().end());
  act.transitive = true;
  return act;
}

PermutationAction natural_action(const FiniteGroup& g) {
  if (g.permutations().empty()) throw Error(ErrorCode::invalid_argument, "group has no permutation representation");
  PermutationAction act;
  act.degree = g.permutations().front().size();
  act.image.reserve(g.order() * act.degree);
  for (const auto& p : g.permutations()) act.image.insert(act.image.end(), p.begin(), p.end());
  act.transitive = orbit_is_everything(act, g.order());
  return act;
}

PermutationAction coset_action(const FiniteGroup& g, const SubgroupRecord& h) {
  PermutationAction act;
  act.degree = h.index;
  act.image.resize(g.order() * act.degree);
  for (Element x = 0; x < g.order(); ++x)
    for (std::uint32_t i = 0; i < h.index; ++i) act.image[x * act.degree + i] = h.coset_of[g.mul(x, h.coset_reps[i])];
  act.transitive = true;
  return act;
}

SubgroupRecord point_stabilizer(const FiniteGroup& g, const PermutationAction& act, std::uint32_t point) {
  if (point >= act.degree) throw Error(ErrorCode::invalid_argument, "point out of range");
  Subset s(g.order());
  for (Element x = 0; x < g.order(); ++x)
    if (act.apply(x, point) == point) s.set(x);
  return make_subgroup(g, s);
}

}  // namespace qplab
