#include "qplab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "qplab/error.hpp"
#include "qplab/freeness.hpp"
#include "qplab/rng.hpp"

namespace qplab {

std::size_t CosetTripleRelation::targets(std::size_t i, std::size_t j) const {
  std::size_t c = 0;
  for (std::size_t l = 0; l < k; ++l) c += contains(i, j, l);
  return c;
}

CosetTripleRelation coset_relation(const FiniteGroup& g, const SubgroupRecord& h) {
  CosetTripleRelation rel;
  rel.k = h.index;
  rel.triples.assign(rel.k * rel.k * rel.k, 0);
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      rel.triples[(h.coset_of[a] * rel.k + h.coset_of[b]) * rel.k + h.coset_of[g.mul(a, b)]] = 1;
  return rel;
}

namespace {

class RelationState {
 public:
  explicit RelationState(const CosetTripleRelation& rel) : rel_(rel), in_(rel.k) {}

  bool can_add(std::size_t x) const {
    if (in_.test(static_cast<Element>(x)) || rel_.contains(x, x, x)) return false;
    for (auto a : members_) {
      if (rel_.contains(x, x, a) || rel_.contains(x, a, x) || rel_.contains(a, x, x)) return false;
      for (auto b : members_)
        if (rel_.contains(x, a, b) || rel_.contains(a, x, b) || rel_.contains(a, b, x)) return false;
    }
    return true;
  }
  void add(std::size_t x) {
    in_.set(static_cast<Element>(x));
    members_.push_back(x);
  }
  void pop() {
    in_.reset(static_cast<Element>(members_.back()));
    members_.pop_back();
  }
  std::size_t size() const { return members_.size(); }
  const Subset& set() const { return in_; }

 private:
  const CosetTripleRelation& rel_;
  Subset in_;
  std::vector<std::size_t> members_;
};

struct RelationSearch {
  const CosetTripleRelation& rel;
  BudgetMeter& meter;
  RelationState state;
  std::size_t best = 0;
  Subset best_set;

  std::size_t open_from(std::size_t from) const {
    std::size_t c = 0;
    for (std::size_t y = from; y < rel.k; ++y) c += state.can_add(y);
    return c;
  }

  void run(std::size_t next) {
    if (!meter.tick()) return;
    if (state.size() > best) {
      best = state.size();
      best_set = state.set();
    }
    if (state.size() + open_from(next) <= best) return;
    for (std::size_t x = next; x < rel.k; ++x) {
      if (!state.can_add(x)) continue;
      state.add(x);
      run(x + 1);
      state.pop();
      if (meter.exhausted() || state.size() + open_from(x + 1) <= best) return;
    }
  }
};

}  // namespace

RelationFreeResult max_relation_free(const CosetTripleRelation& rel, const RelationFreeOptions& opts) {
  RelationFreeResult res;
  BudgetMeter meter(opts.budget);
  if (rel.k <= opts.exact_cap && opts.budget.mode == SearchMode::exact) {
    RelationSearch search{rel, meter, RelationState(rel), 0, Subset(rel.k)};
    search.run(0);
    res.cosets = search.best_set;
    res.size = search.best;
    res.exact = !meter.exhausted();
  } else {
    // Greedy over random orders; keep the best (lexicographic tie-break).
    Rng rng(opts.seed);
    std::vector<std::size_t> order(rel.k);
    for (std::size_t i = 0; i < rel.k; ++i) order[i] = i;
    res.cosets = Subset(rel.k);
    bool first = true;
    for (std::uint64_t r = 0; r < opts.restarts && meter.tick(); ++r) {
      if (!first) rng.shuffle(order);
      first = false;
      RelationState st(rel);
      for (auto x : order)
        if (st.can_add(x)) st.add(x);
      if (st.size() > res.size || (st.size() == res.size && st.set().lex_less(res.cosets))) {
        res.size = st.size();
        res.cosets = st.set();
      }
    }
    res.exact = false;
  }
  res.nodes = meter.nodes();
  res.empirical_c = rel.k ? static_cast<double>(res.size) / std::sqrt(static_cast<double>(rel.k)) : 0.0;
  return res;
}

Subset coset_union(const SubgroupRecord& h, const Subset& cosets) {
  Subset out(h.coset_of.size());
  for (Element x = 0; x < h.coset_of.size(); ++x)
    if (cosets.test(h.coset_of[x])) out.set(x);
  return out;
}

Subset point_action_set(const FiniteGroup& g, const PermutationAction& act, const Subset& points) {
  if (!act.transitive) throw Error(ErrorCode::invalid_argument, "point-action construction needs a transitive action");
  if (points.universe() != act.degree) throw Error(ErrorCode::invalid_argument, "point subset universe differs from action degree");
  if (points.test(0)) throw Error(ErrorCode::invalid_argument, "point subset must not contain the base point");
  Subset s(g.order());
  for (Element x = 0; x < g.order(); ++x)
    if (points.test(act.apply(x, 0))) s.set(x);
  return s;
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace {

bool next_combination(std::vector<std::uint32_t>& t, std::uint32_t hi) {
  // t ascending over [1, hi]; advance to the next lexicographic k-subset.
  const std::size_t k = t.size();
  std::size_t i = k;
  while (i > 0 && t[i - 1] == hi - (k - i)) --i;
  if (i == 0) return false;
  ++t[i - 1];
  for (std::size_t j = i; j < k; ++j) t[j] = t[j - 1] + 1;
  return true;
}

}  // namespace

PointActionReport point_action_search(const FiniteGroup& g, const PermutationAction& act, std::size_t k,
                                 const PointActionOptions& opts) {
  const std::size_t m = act.degree;
  if (!act.transitive) throw Error(ErrorCode::invalid_argument, "point-action search needs a transitive action");
  if (m <= 3) throw Error(ErrorCode::invalid_argument, "action degree must exceed 3");
  if (k < 3 || k > m - 1) throw Error(ErrorCode::invalid_argument, "k must satisfy 3 <= k <= m-1");

  PointActionReport rep;
  rep.n = g.order();
  rep.m = m;
  rep.k = k;
  rep.set_size = k * rep.n / m;
  rep.seed = opts.seed;
  const double n = static_cast<double>(rep.n);
  rep.bound = 4.0 * n * n * std::pow(static_cast<double>(k), 3) / std::pow(static_cast<double>(m) - 3.0, 3);

  auto count_for = [&](const std::vector<std::uint32_t>& t) {
    const Subset pts = Subset::of(m, t);
    const Subset s = point_action_set(g, act, pts);
    return count_solutions(g, s, s, s).count;
  };

  bool have_best = false;
  auto consider = [&](const std::vector<std::uint32_t>& t, std::uint64_t c) {
    if (!have_best || c < rep.count_best || (c == rep.count_best && t < rep.t_best)) {
      rep.count_best = c;
      rep.t_best = t;
      have_best = true;
    }
  };

  const auto hi = static_cast<std::uint32_t>(m - 1);
  if (opts.kind == SearchKind::exhaustive) {
    const BigInt total = binomial(static_cast<long long>(m - 1), static_cast<long long>(k));
    if (total > opts.exhaustive_cap)
      throw Error(ErrorCode::cap_exceeded, "C(m-1, k) = " + total.str() + " exceeds the exhaustive cap");
    rep.exhaustive = true;
    std::vector<std::vector<std::uint32_t>> all;
    std::vector<std::uint32_t> t(k);
    for (std::size_t i = 0; i < k; ++i) t[i] = static_cast<std::uint32_t>(i + 1);
    do {
      all.push_back(t);
    } while (next_combination(t, hi));
    std::vector<std::uint64_t> counts(all.size());
    const unsigned threads = std::max(1u, opts.threads);
    auto work = [&](unsigned w) {
      for (std::size_t i = w; i < all.size(); i += threads) counts[i] = count_for(all[i]);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    BigInt sum = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      sum += counts[i];
      consider(all[i], counts[i]);
    }
    rep.candidates = all.size();
    const BigInt nn = BigInt(rep.n) * rep.n;
    const auto mm = static_cast<long long>(m), kk = static_cast<long long>(k);
    rep.average_lhs = sum;
    rep.average_middle = BigInt(3) * rep.n * (rep.n / m) * binomial(mm - 3, kk - 2) + nn * binomial(mm - 4, kk - 3);
    rep.average_rhs = BigInt(4) * nn * binomial(mm - 4, kk - 3);
    rep.mean_count = Rational(sum, total);
    rep.mean_bound = Rational(*rep.average_rhs, total);
    const Rational simplified = Rational(BigInt(4) * nn * kk * (kk - 1) * (kk - 2), BigInt(mm - 1) * (mm - 2) * (mm - 3));
    rep.simplification_identity = *rep.mean_bound == simplified;
  } else {
    Rng rng(opts.seed);
    std::set<std::vector<std::uint32_t>> seen;
    const BigInt total = binomial(static_cast<long long>(m - 1), static_cast<long long>(k));
    const std::uint64_t trials = total < opts.trials ? total.convert_to<std::uint64_t>() : opts.trials;
    while (seen.size() < trials) {
      auto t = rng.sample(hi, static_cast<std::uint32_t>(k));
      for (auto& x : t) ++x;  // shift into {1..m-1}
      if (!seen.insert(t).second) continue;
      consider(t, count_for(t));
    }
    rep.candidates = seen.size();
  }
  return rep;
}

}  // namespace qplab
