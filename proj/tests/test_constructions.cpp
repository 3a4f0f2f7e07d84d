#include "catalog.hpp"
#include "doctest.h"
#include "qplab/constructions.hpp"
#include "qplab/error.hpp"
#include "qplab/freeness.hpp"

using namespace qplab;

namespace {

const SubgroupRecord& minimal_index_subgroup(const SubgroupLattice& lat) {
  for (const auto& h : lat.subgroups)
    if (h.index == *lat.min_index) return h;
  throw std::logic_error("no subgroup of minimal index");
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binomial(11, 3) == 165);
  CHECK(binomial(11, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("coset relation structure") {
  const auto g = build_named("alternating:5");
  const auto lat = subgroups_and_min_index(g);
  const auto& h = minimal_index_subgroup(lat);
  CHECK(h.index == 5);
  const auto rel = coset_relation(g, h);
  CHECK(rel.k == 5);
  // H H = H and every pair of cosets hits at least one coset.
  CHECK(rel.contains(0, 0, 0));
  for (std::size_t i = 0; i < rel.k; ++i)
    for (std::size_t j = 0; j < rel.k; ++j) CHECK(rel.targets(i, j) >= 1);
}

TEST_CASE("relation-free cosets give product-free unions") {
  for (const char* spec : {"alternating:5", "psl2:7", "symmetric:4", "alternating:4", "cyclic:9"}) {
    CAPTURE(spec);
    const auto g = build_named(spec);
    const auto lat = subgroups_and_min_index(g);
    const auto& h = minimal_index_subgroup(lat);
    const auto rel = coset_relation(g, h);
    const auto best = max_relation_free(rel);
    CHECK(best.exact);
    CHECK(best.size >= 1);
    CHECK_FALSE(best.cosets.test(0));
    const auto s = coset_union(h, best.cosets);
    CHECK(s.count() == best.size * h.order);
    CHECK(is_product_free(g, s));
  }
}

TEST_CASE("greedy relation-free search above the exact cap") {
  const auto g = build_named("psl2:7");
  const auto lat = subgroups_and_min_index(g);
  const auto& h = minimal_index_subgroup(lat);
  RelationFreeOptions o;
  o.exact_cap = 3;
  const auto a = max_relation_free(coset_relation(g, h), o);
  const auto b = max_relation_free(coset_relation(g, h), o);
  CHECK_FALSE(a.exact);
  CHECK(a.cosets == b.cosets);
  CHECK(is_product_free(g, coset_union(h, a.cosets)));
}

TEST_CASE("point-action sets") {
  const auto g = build_named("symmetric:4");
  const auto act = natural_action(g);
  const std::vector<Element> t = {1, 2};
  const auto s = point_action_set(g, act, Subset::of(4, t));
  CHECK(s.count() == 2 * g.order() / 4);
  s.for_each([&](Element x) { CHECK((act.apply(x, 0) == 1 || act.apply(x, 0) == 2)); });
  const std::vector<Element> bad = {0, 1};
  CHECK_THROWS_AS(point_action_set(g, act, Subset::of(4, bad)), Error);
  CHECK_THROWS_AS(point_action_set(g, act, Subset::of(3, t)), Error);
}

TEST_CASE("averaging chain on a small regular action") {
  const auto g = build_named("cyclic:12");
  const auto act = regular_action(g);
  for (std::size_t k = 3; k <= 5; ++k) {
    CAPTURE(k);
    const auto r = point_action_search(g, act, k);
    CHECK(r.exhaustive);
    CHECK(r.candidates == binomial(11, static_cast<long long>(k)));
    CHECK(static_cast<double>(r.count_best) <= r.bound);
    CHECK(*r.average_lhs <= *r.average_middle);
    CHECK(*r.average_middle <= *r.average_rhs);
    CHECK(r.simplification_identity);
    // Minimum never exceeds the mean.
    CHECK(Rational(BigInt(r.count_best)) <= *r.mean_count);
  }
}

TEST_CASE("threaded exhaustive search matches single-threaded") {
  const auto g = build_named("dihedral:5");
  const auto act = regular_action(g);
  PointActionOptions one, four;
  four.threads = 4;
  const auto a = point_action_search(g, act, 4, one);
  const auto b = point_action_search(g, act, 4, four);
  CHECK(a.t_best == b.t_best);
  CHECK(a.count_best == b.count_best);
  CHECK(*a.average_lhs == *b.average_lhs);
}

TEST_CASE("sampled search is seed-deterministic") {
  const auto g = build_named("cyclic:30");
  const auto act = regular_action(g);
  PointActionOptions o;
  o.kind = SearchKind::sampled;
  o.trials = 200;
  const auto a = point_action_search(g, act, 4, o);
  const auto b = point_action_search(g, act, 4, o);
  CHECK(a.t_best == b.t_best);
  CHECK(a.candidates == 200);
  CHECK_FALSE(a.average_lhs.has_value());
}

TEST_CASE("point-action argument checks") {
  const auto g = build_named("cyclic:12");
  const auto act = regular_action(g);
  CHECK_THROWS_AS(point_action_search(g, act, 2), Error);
  CHECK_THROWS_AS(point_action_search(g, act, 12), Error);
  PointActionOptions o;
  o.exhaustive_cap = 10;
  CHECK_THROWS_AS(point_action_search(g, act, 4, o), Error);
}
