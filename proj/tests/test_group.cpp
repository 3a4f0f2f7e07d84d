#include <sstream>

#include "catalog.hpp"
#include "doctest.h"
#include "qplab/error.hpp"
#include "qplab/io.hpp"

using namespace qplab;

namespace {

bool is_identity_row(const FiniteGroup& g) {
  for (Element x = 0; x < g.order(); ++x)
    if (g.mul(0, x) != x || g.mul(x, 0) != x) return false;
  return true;
}

}  // namespace

TEST_CASE("family orders and identity placement") {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"cyclic:1", 1},        {"cyclic:12", 12},      {"dihedral:4", 8},     {"dihedral:1", 2},
      {"symmetric:3", 6},     {"symmetric:5", 120},   {"alternating:4", 12}, {"alternating:5", 60},
      {"sl2:3", 24},          {"sl2:5", 120},         {"psl2:5", 60},        {"psl2:7", 168},
      {"psl2:11", 660},       {"psl2:13", 1092},      {"product(cyclic:2,symmetric:3)", 12},
      {"product(cyclic:2,product(cyclic:2,cyclic:3))", 12}};
  for (const auto& [spec, n] : cases) {
    CAPTURE(spec);
    const auto g = build_named(spec);
    CHECK(g.order() == n);
    CHECK(is_identity_row(g));
    CHECK(g.validation() == (n > 512 ? Validation::sampled : Validation::full));
  }
}

TEST_CASE("descriptor forms and rejections") {
  CHECK(build_named("cyclic 5").order() == 5);
  CHECK_THROWS_AS(build_named("sl2:13"), Error);  // order 2184 above the cap
  CHECK_THROWS_AS(build_named("psl2:9"), Error);
  CHECK_THROWS_AS(build_named("psl2:17"), Error);
  CHECK_THROWS_AS(build_named("klein:4"), Error);
  CHECK_THROWS_AS(build_named("cyclic:x"), Error);
  CHECK_THROWS_AS(build_named("product(cyclic:2"), Error);
  try {
    build_named("sl2:13");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("abelian and element orders") {
  CHECK(build_named("cyclic:12").is_abelian());
  CHECK_FALSE(build_named("symmetric:3").is_abelian());
  const auto g = build_named("dihedral:5");
  std::size_t involutions = 0;
  for (Element x = 0; x < g.order(); ++x) involutions += g.element_order(x) == 2;
  CHECK(involutions == 5);
  const auto a5 = build_named("alternating:5");
  std::map<std::size_t, std::size_t> hist;
  for (Element x = 0; x < a5.order(); ++x) ++hist[a5.element_order(x)];
  CHECK(hist == std::map<std::size_t, std::size_t>{{1, 1}, {2, 15}, {3, 20}, {5, 24}});
}

TEST_CASE("conjugacy class counts") {
  for (const auto& e : testing::catalog()) {
    CAPTURE(e.label);
    const auto g = testing::catalog_group(e);
    const auto cls = conjugacy_classes(g);
    CHECK(cls.classes.size() == e.degrees.size());
    std::size_t total = 0;
    for (auto s : cls.sizes) {
      CHECK(g.order() % s == 0);
      total += s;
    }
    CHECK(total == g.order());
    CHECK(cls.classes[0] == std::vector<Element>{0});
  }
}

TEST_CASE("quaternion group from generators") {
  const auto q8 = testing::quaternion_group();
  CHECK(q8.order() == 8);
  std::size_t involutions = 0;
  for (Element x = 0; x < 8; ++x) involutions += q8.element_order(x) == 2;
  CHECK(involutions == 1);
  CHECK_FALSE(q8.is_abelian());
}

TEST_CASE("table validation catches each defect") {
  SUBCASE("identity not at 0") {
    const std::vector<Element> t = {1, 0, 0, 1};
    const auto chk = FiniteGroup::check_table(2, t);
    CHECK_FALSE(chk.ok);
    CHECK_FALSE(chk.identity_ok);
  }
  SUBCASE("not latin") {
    const std::vector<Element> t = {0, 1, 2, 1, 1, 0, 2, 0, 1};
    const auto chk = FiniteGroup::check_table(3, t);
    CHECK_FALSE(chk.ok);
    CHECK_FALSE(chk.latin_ok);
  }
  SUBCASE("latin but not associative") {
    // Loop of order 5 with identity 0 that is not a group.
    const std::vector<Element> t = {0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0};
    const auto chk = FiniteGroup::check_table(5, t);
    CHECK_FALSE(chk.ok);
    CHECK(chk.latin_ok);
    CHECK_FALSE(chk.associative_ok);
    REQUIRE(chk.associativity_witness.has_value());
    const auto [a, b, c] = *chk.associativity_witness;
    CHECK(t[t[a * 5 + b] * 5 + c] != t[a * 5 + t[b * 5 + c]]);
    CHECK_THROWS_AS(FiniteGroup::from_table(5, t), Error);
  }
  SUBCASE("valid") {
    const auto g = build_named("symmetric:3");
    CHECK(FiniteGroup::check_table(6, g.table()).ok);
  }
}

TEST_CASE("hash ignores the name and is stable across constructions") {
  const auto a = build_named("cyclic:6");
  auto table = std::vector<Element>(a.table().begin(), a.table().end());
  const auto b = FiniteGroup::from_table(6, table, "other name");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash_hex().size() == 16);
  CHECK(build_named("cyclic:6").hash() != build_named("symmetric:3").hash());
}

TEST_CASE("cayley table round trip") {
  for (const char* spec : {"psl2:7", "dihedral:6", "product(cyclic:3,alternating:4)"}) {
    CAPTURE(spec);
    const auto g = build_named(spec);
    std::stringstream ss;
    write_cayley_table(ss, g);
    const auto back = parse_cayley_table(ss);
    CHECK(back.hash() == g.hash());
  }
}

TEST_CASE("parse errors carry line numbers") {
  std::istringstream in("# comment\n3\n0 1 2\n1 2 x\n2 0 1\n");
  try {
    parse_cayley_table(in);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  std::istringstream bad_set("1\n2\n99\n");
  CHECK_THROWS_AS(parse_subset(bad_set, 10), Error);
  std::istringstream ok_set("# A\n1\n\n3\n");
  CHECK(parse_subset(ok_set, 10).elements() == std::vector<Element>{1, 3});
}

TEST_CASE("generator files") {
  std::istringstream in("# S3\n3\n1 0 2\n1 2 0\n");
  const auto gens = parse_generators(in);
  REQUIRE(gens.size() == 2);
  const auto [g, act] = from_generators(gens);
  CHECK(g.order() == 6);
  CHECK(act.degree == 3);
  CHECK(act.transitive);
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      for (std::uint32_t x = 0; x < 3; ++x) CHECK(act.apply(g.mul(a, b), x) == act.apply(a, act.apply(b, x)));
}

TEST_CASE("subgroups, cosets and minimal index") {
  struct Case {
    const char* spec;
    std::size_t subgroups;
    std::size_t min_index;
  };
  for (const auto& c : {Case{"cyclic:12", 6, 2}, Case{"symmetric:3", 6, 2}, Case{"alternating:4", 10, 3},
                        Case{"symmetric:4", 30, 2}, Case{"alternating:5", 59, 5}, Case{"psl2:7", 179, 7}}) {
    CAPTURE(c.spec);
    const auto g = build_named(c.spec);
    const auto lat = subgroups_and_min_index(g);
    CHECK(lat.exact);
    CHECK(lat.subgroups.size() == c.subgroups);
    REQUIRE(lat.min_index.has_value());
    CHECK(*lat.min_index == c.min_index);
  }
  const auto q8 = testing::quaternion_group();
  const auto lat = subgroups_and_min_index(q8);
  CHECK(lat.subgroups.size() == 6);
  CHECK(*lat.min_index == 2);
  CHECK_FALSE(subgroups_and_min_index(build_named("cyclic:1")).min_index.has_value());
}

TEST_CASE("coset bookkeeping and coset action") {
  const auto g = build_named("symmetric:4");
  const auto lat = subgroups_and_min_index(g);
  for (const auto& h : lat.subgroups) {
    CHECK(h.order * h.index == g.order());
    CHECK(h.coset_reps.size() == h.index);
    CHECK(h.coset_reps[0] == 0);
    for (Element x = 0; x < g.order(); ++x) {
      const auto c = h.coset_of[x];
      // x and its representative generate the same left coset: rep^-1 x in H.
      CHECK(h.elements.test(g.mul(g.inv(h.coset_reps[c]), x)));
    }
    const auto act = coset_action(g, h);
    CHECK(act.transitive);
    for (Element a = 0; a < g.order(); a += 5)
      for (Element b = 0; b < g.order(); b += 3)
        for (std::uint32_t i = 0; i < act.degree; ++i)
          CHECK(act.apply(g.mul(a, b), i) == act.apply(a, act.apply(b, i)));
    const auto stab = point_stabilizer(g, act, 0);
    CHECK(stab.elements == h.elements);
  }
}

TEST_CASE("make_subgroup rejects non-subgroups") {
  const auto g = build_named("cyclic:6");
  const std::vector<Element> not_closed = {0, 1};
  CHECK_THROWS_AS(make_subgroup(g, Subset::of(6, not_closed)), Error);
  const std::vector<Element> gens = {2};
  const auto h = subgroup_closure(g, gens);
  CHECK(h.count() == 3);
}

TEST_CASE("regular and natural actions") {
  const auto g = build_named("alternating:4");
  const auto reg = regular_action(g);
  CHECK(reg.degree == 12);
  CHECK(reg.transitive);
  const auto nat = natural_action(g);
  CHECK(nat.degree == 4);
  CHECK(nat.transitive);
  CHECK(orbit_is_everything(nat, g.order()));
  CHECK_THROWS_AS(natural_action(build_named("cyclic:5")), Error);
}

TEST_CASE("sampled validation above the full-validation cap") {
  GroupLimits tight;
  tight.full_validation_cap = 10;
  tight.sampled_triples = 1000;
  const auto g = load_group("alternating:4", tight);
  CHECK(g.validation() == Validation::sampled);
}
