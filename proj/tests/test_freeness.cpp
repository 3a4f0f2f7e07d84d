#include <chrono>

#include "catalog.hpp"
#include "doctest.h"
#include "qplab/error.hpp"
#include "qplab/freeness.hpp"
#include "qplab/repr.hpp"
#include "qplab/rng.hpp"

using namespace qplab;

namespace {

/// Independent oracle: scan all 2^n subsets.
std::size_t alpha_by_scan(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a) {
      if (!((mask >> a) & 1)) continue;
      for (Element b = 0; b < n && ok; ++b)
        if (((mask >> b) & 1) && ((mask >> g.mul(a, b)) & 1)) ok = false;
    }
    if (ok) best = size;
  }
  return best;
}

std::uint64_t brute_count(const FiniteGroup& g, const Subset& a, const Subset& b, const Subset& c) {
  std::uint64_t count = 0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y) count += a.test(x) && b.test(y) && c.test(g.mul(x, y));
  return count;
}

Subset random_subset(std::size_t n, Rng& rng) {
  const auto k = static_cast<std::uint32_t>(1 + rng.below(n));
  return Subset::of(n, rng.sample(static_cast<std::uint32_t>(n), k));
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/4") == Rational(1, 4));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("solution counts agree with brute force and the row identity") {
  Rng rng(2);
  for (const char* spec : {"cyclic:9", "symmetric:3", "alternating:4", "dihedral:5"}) {
    const auto g = build_named(spec);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_subset(g.order(), rng), b = random_subset(g.order(), rng),
                 c = random_subset(g.order(), rng);
      const auto tc = count_solutions(g, a, b, c);
      CHECK(tc.count == brute_count(g, a, b, c));
      CHECK(count_solutions_by_rows(g, a, b, c) == tc.count);
      REQUIRE(tc.p.has_value());
      const auto n = static_cast<long long>(g.order());
      CHECK(*tc.p * tc.r * tc.s * tc.t * n * n == Rational(static_cast<long long>(tc.count)));
    }
  }
}

TEST_CASE("product-free predicate") {
  const auto z5 = build_named("cyclic:5");
  const std::vector<Element> ok = {1, 4}, bad = {1, 2};
  CHECK(is_product_free(z5, Subset::of(5, ok)));
  CHECK_FALSE(is_product_free(z5, Subset::of(5, bad)));
  CHECK(is_product_free(z5, Subset(5)));
  const std::vector<Element> with_identity = {0};
  CHECK_FALSE(is_product_free(z5, Subset::of(5, with_identity)));
}

TEST_CASE("exact alpha matches the subset-scan oracle") {
  struct Case {
    std::string spec;
    std::size_t alpha;
  };
  const std::vector<Case> cases = {{"cyclic:5", 2},    {"cyclic:6", 3},     {"cyclic:7", 2},
                                   {"symmetric:3", 3}, {"dihedral:4", 4},   {"Q8", 4},
                                   {"cyclic:8", 4},    {"cyclic:9", 3},     {"cyclic:10", 5},
                                   {"dihedral:3", 3},  {"alternating:4", 4}};
  for (const auto& c : cases) {
    CAPTURE(c.spec);
    const auto g = c.spec == "Q8" ? testing::quaternion_group() : build_named(c.spec);
    CHECK(alpha_by_scan(g) == c.alpha);
    const auto r = max_product_free(g);
    CHECK(r.exact);
    CHECK(r.alpha == c.alpha);
    CHECK(r.witness.count() == c.alpha);
    CHECK(is_product_free(g, r.witness));
  }
}

TEST_CASE("exact optimum is the lexicographically smallest") {
  const auto g = build_named("cyclic:5");
  const auto r = max_product_free(g);
  CHECK(r.witness.elements() == std::vector<Element>{1, 4});
}

TEST_CASE("heuristic alpha is product-free and deterministic") {
  const auto g = build_named("psl2:7");
  AlphaOptions o;
  o.budget.mode = SearchMode::heuristic;
  o.budget.time_cap_s = 30;
  o.budget.node_cap = 20000;
  const auto a = max_product_free(g, o);
  const auto b = max_product_free(g, o);
  CHECK_FALSE(a.exact);
  CHECK(is_product_free(g, a.witness));
  CHECK(a.witness == b.witness);
  // A nontrivial coset union beats the trivial bound from a single coset.
  CHECK(a.alpha >= 24);
}

TEST_CASE("budget exhaustion falls back to a valid lower bound") {
  const auto g = build_named("alternating:5");
  AlphaOptions o;
  o.exact_order_cap = 100;
  o.budget.node_cap = 200;
  const auto r = max_product_free(g, o);
  CHECK_FALSE(r.exact);
  CHECK(is_product_free(g, r.witness));
  CHECK(r.alpha == r.witness.count());
}

TEST_CASE("product-poor certificates") {
  const auto g = build_named("cyclic:6");
  const std::vector<Element> odd = {1, 3, 5};
  const auto cert = poor_certificate(g, Subset::of(6, odd), Rational(0));
  CHECK(cert.pair_count == 0);
  CHECK(cert.is_poor);
  const auto full = poor_certificate(g, Subset::full(6), Rational(1, 2));
  CHECK(full.pair_count == 36);
  CHECK(full.p_achieved == Rational(1));
  CHECK_FALSE(full.is_poor);
  CHECK_THROWS_AS(poor_certificate(g, Subset(6), Rational(0)), Error);
}

TEST_CASE("density bound on random triples") {
  Rng rng(8);
  for (const auto& e : testing::catalog()) {
    if (e.order > 200) continue;
    const auto g = testing::catalog_group(e);
    for (int t = 0; t < 50; ++t) {
      const auto r = check_density_bound(g, e.delta, random_subset(g.order(), rng), random_subset(g.order(), rng),
                                     random_subset(g.order(), rng));
      CHECK(r.holds);
    }
  }
}

TEST_CASE("density bound on hand-computed triples") {
  // Z6, A = B = odd, C = even: all 9 products land in C, so p r s t n^2 = 9
  // gives p = 2 and (1-p)^2 = 1.
  const auto g = build_named("cyclic:6");
  const std::vector<Element> odd = {1, 3, 5}, even = {0, 2, 4};
  const auto r = check_density_bound(g, 1, Subset::of(6, odd), Subset::of(6, odd), Subset::of(6, even));
  CHECK(r.triple.count == 9);
  CHECK(*r.triple.p == Rational(2));
  CHECK(r.lhs == Rational(1, 8));
  // A = B = C = odd: no solutions, p = 0, lhs = r s t = 1/8.
  const auto s = check_density_bound(g, 1, Subset::of(6, odd), Subset::of(6, odd), Subset::of(6, odd));
  CHECK(s.triple.count == 0);
  CHECK(s.lhs == Rational(1, 8));
}

TEST_CASE("poor-set size constant") {
  const auto g = build_named("psl2:7");
  const std::vector<Element> one = {1};
  const auto r = poor_set_size(g, Subset::of(g.order(), one), Rational(1, 2));
  CHECK(r.delta == 3);
  CHECK(r.applicable);  // 1/2 <= 3^(-1/3)
  CHECK(r.p_limit == doctest::Approx(std::pow(3.0, -1.0 / 3.0)));
  CHECK_FALSE(poor_set_size(g, Subset::of(g.order(), one), Rational(9, 10)).applicable);
}
