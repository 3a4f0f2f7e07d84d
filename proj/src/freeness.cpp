#include "qplab/freeness.hpp"

#include <algorithm>
#include <cmath>

#include "qplab/error.hpp"
#include "qplab/repr.hpp"
#include "qplab/rng.hpp"

namespace qplab {

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  auto bad = [&]() -> Error { return Error(ErrorCode::invalid_argument, "cannot parse rational '" + s + "'"); };
  if (s.empty()) throw bad();
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) throw bad();
      return Rational(num, den);
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
      if (frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
      BigInt scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const bool neg = !whole.empty() && whole[0] == '-';
      BigInt w = whole.empty() || whole == "-" ? BigInt(0) : BigInt(whole);
      BigInt f = frac.empty() ? BigInt(0) : BigInt(frac);
      Rational q = Rational(w) + Rational(f, scale) * (neg ? -1 : 1);
      return q;
    }
    return Rational(BigInt(s));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw bad();
  }
}

TripleCount count_solutions(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c) {
  TripleCount tc{a, b, c, {}, {}, {}, 0, std::nullopt};
  const auto n = static_cast<long long>(g.order());
  const auto bs = b.elements();
  a.for_each([&](Element x) {
    const auto row = g.row(x);
    for (Element y : bs) tc.count += c.test(row[y]);
  });
  const auto na = static_cast<long long>(a.count()), nb = static_cast<long long>(b.count()),
             nc = static_cast<long long>(c.count());
  tc.r = Rational(na, n);
  tc.s = Rational(nb, n);
  tc.t = Rational(nc, n);
  if (na && nb && nc) tc.p = Rational(BigInt(tc.count) * n, BigInt(na) * nb * nc);
  return tc;
}

std::uint64_t count_solutions_by_rows(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c) {
  std::uint64_t total = 0;
  const auto as = a.elements();
  c.for_each([&](Element z) {
    std::uint64_t k = 0;
    for (Element x : as) k += b.test(g.mul(g.inv(x), z));
    total += k;
  });
  return total;
}

bool is_product_free(const FiniteGroup& g, const Subset& s) {
  const auto members = s.elements();
  for (Element x : members) {
    const auto row = g.row(x);
    for (Element y : members)
      if (s.test(row[y])) return false;
  }
  return true;
}

PoorCertificate poor_certificate(const FiniteGroup& g, const Subset& s, const Rational& p) {
  if (s.empty()) throw Error(ErrorCode::invalid_argument, "product-poor certificate needs a nonempty set");
  PoorCertificate cert;
  cert.subset = s;
  cert.pair_count = count_solutions(g, s, s, s).count;
  const auto size = static_cast<long long>(s.count());
  cert.p_achieved = Rational(BigInt(cert.pair_count), BigInt(size) * size);
  cert.claim_p = p;
  cert.is_poor = Rational(BigInt(cert.pair_count)) <= p * size * size;
  return cert;
}

DensityBoundReport check_density_bound(const FiniteGroup& g, std::size_t delta_value, const Subset& a, const Subset& b,
                                const Subset& c) {
  if (a.empty() || b.empty() || c.empty())
    throw Error(ErrorCode::invalid_argument, "triple check needs nonempty A, B and C");
  DensityBoundReport rep;
  rep.triple = count_solutions(g, a, b, c);
  rep.delta = delta_value;
  const Rational one_minus_p = Rational(1) - *rep.triple.p;
  rep.lhs = rep.triple.r * rep.triple.s * rep.triple.t * one_minus_p * one_minus_p * static_cast<long long>(delta_value);
  rep.holds = rep.lhs <= Rational(1) + Rational(1, 1'000'000'000);
  return rep;
}

DensityBoundReport check_density_bound(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c) {
  return check_density_bound(g, delta(g), a, b, c);
}

// ---------------------------------------------------------------------------
// Maximum product-free subset

namespace {

// Incremental product-free set. y can join S iff y != e, y^2 is not in S and
// y avoids SS, S^-1 S and S S^-1; blocked_ counts the witnesses for the last
// three so add/pop are O(|S|) and can_add is O(1).
class FreeSetState {
 public:
  explicit FreeSetState(const FiniteGroup& g) : g_(g), in_(g.order()), blocked_(g.order(), 0) {}

  bool can_add(Element y) const {
    return y != 0 && !in_.test(y) && blocked_[y] == 0 && !in_.test(g_.mul(y, y));
  }

  void add(Element x) {
    in_.set(x);
    members_.push_back(x);
    update(x, +1);
  }
  void pop() {
    const Element x = members_.back();
    update(x, -1);
    in_.reset(x);
    members_.pop_back();
  }
  std::size_t size() const { return members_.size(); }
  const Subset& set() const { return in_; }

 private:
  // Pairs (a, x) and (x, a) for a in S, where x is already in members_.
  void update(Element x, int delta) {
    const Element xi = g_.inv(x);
    for (Element a : members_) {
      const Element ai = g_.inv(a);
      bump(g_.mul(x, a), delta);
      bump(g_.mul(xi, a), delta);
      bump(g_.mul(x, ai), delta);
      if (a == x) continue;
      bump(g_.mul(a, x), delta);
      bump(g_.mul(ai, x), delta);
      bump(g_.mul(a, xi), delta);
    }
  }
  void bump(Element y, int delta) { blocked_[y] += delta; }

  const FiniteGroup& g_;
  Subset in_;
  std::vector<int> blocked_;
  std::vector<Element> members_;
};

struct ExactSearch {
  const FiniteGroup& g;
  BudgetMeter& meter;
  FreeSetState state;
  std::size_t best = 0;
  Subset best_set;
  std::size_t cap;  // |S| <= n/2: aS and S are disjoint for a in S

  void run(Element next) {
    if (!meter.tick()) return;
    if (state.size() > best) {
      best = state.size();
      best_set = state.set();
    }
    if (next >= g.order() || best >= cap) return;
    std::size_t open = 0;
    for (Element y = next; y < g.order(); ++y) open += state.can_add(y);
    if (state.size() + open <= best) return;
    for (Element x = next; x < g.order(); ++x) {
      if (!state.can_add(x)) continue;
      state.add(x);
      run(x + 1);
      state.pop();
      if (meter.exhausted()) return;
      // Bound for the branches that skip x as well.
      std::size_t rest = 0;
      for (Element y = x + 1; y < g.order(); ++y) rest += state.can_add(y);
      if (state.size() + rest <= best) return;
    }
  }
};

Subset greedy_extend(const FiniteGroup& g, Subset start, const std::vector<Element>& order) {
  FreeSetState st(g);
  start.for_each([&](Element x) {
    if (st.can_add(x)) st.add(x);
  });
  for (Element x : order)
    if (st.can_add(x)) st.add(x);
  return st.set();
}

// Drop one element and try to add two; repeat until no improvement.
Subset improve_by_swaps(const FiniteGroup& g, Subset s, BudgetMeter& meter) {
  bool improved = true;
  while (improved && !meter.exhausted()) {
    improved = false;
    const auto members = s.elements();
    for (Element drop : members) {
      if (!meter.tick()) break;
      FreeSetState st(g);
      for (Element x : members)
        if (x != drop) st.add(x);
      std::vector<Element> addable;
      for (Element y = 1; y < g.order(); ++y)
        if (y != drop && st.can_add(y)) addable.push_back(y);
      for (std::size_t i = 0; i < addable.size() && !improved; ++i) {
        st.add(addable[i]);
        for (std::size_t j = i + 1; j < addable.size(); ++j)
          if (st.can_add(addable[j])) {
            st.add(addable[j]);
            s = st.set();
            improved = true;
            break;
          }
        if (!improved) st.pop();
      }
      if (improved) break;
    }
  }
  return s;
}

}  // namespace

AlphaResult max_product_free(const FiniteGroup& g, const AlphaOptions& opts) {
  const std::size_t n = g.order();
  BudgetMeter meter(opts.budget);
  AlphaResult res;
  res.witness = Subset(n);

  if (opts.budget.mode == SearchMode::exact) {
    if (n > opts.exact_order_cap)
      throw Error(ErrorCode::cap_exceeded, "exact product-free search is limited to order " +
                                               std::to_string(opts.exact_order_cap) + " (override the cap)");
    ExactSearch search{g, meter, FreeSetState(g), 0, Subset(n), n / 2};
    search.run(1);
    res.alpha = search.best;
    res.witness = search.best_set;
    res.exact = !meter.exhausted();
    res.nodes_explored = meter.nodes();
    return res;
  }

  std::vector<Element> ascending;
  for (Element x = 1; x < n; ++x) ascending.push_back(x);
  auto consider = [&](const Subset& s) {
    const auto c = s.count();
    if (c > res.alpha || (c == res.alpha && s.lex_less(res.witness))) {
      res.alpha = c;
      res.witness = s;
    }
  };
  // Seeds: nontrivial cosets of subgroups, each product-free on its own.
  if (n <= 200) {
    SubgroupOptions so;
    so.budget.node_cap = 200000;
    for (const auto& h : subgroups_and_min_index(g, so).subgroups) {
      if (h.order == n || meter.exhausted()) continue;
      for (std::uint32_t i = 1; i < h.index; ++i) {
        Subset coset(n);
        for (Element x = 0; x < n; ++x)
          if (h.coset_of[x] == i) coset.set(x);
        consider(improve_by_swaps(g, greedy_extend(g, coset, ascending), meter));
        if (meter.exhausted()) break;
      }
    }
  }
  Rng rng(opts.seed);
  for (std::uint64_t r = 0; r < opts.restarts && !meter.exhausted(); ++r) {
    auto order = ascending;
    rng.shuffle(order);
    consider(improve_by_swaps(g, greedy_extend(g, Subset(n), order), meter));
  }
  res.exact = false;
  res.nodes_explored = meter.nodes();
  return res;
}

PoorSizeReport poor_set_size(const FiniteGroup& g, const Subset& s, const Rational& p) {
  PoorSizeReport rep;
  rep.delta = delta(g);
  rep.p_limit = std::pow(static_cast<double>(rep.delta), -1.0 / 3.0);
  rep.certificate = poor_certificate(g, s, p);
  rep.applicable = to_double(p) <= rep.p_limit + 1e-12;
  rep.empirical_c = static_cast<double>(s.count()) * std::cbrt(static_cast<double>(rep.delta)) /
                    static_cast<double>(g.order());
  return rep;
}

}  // namespace qplab
