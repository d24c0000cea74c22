#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rfg/catalog.hpp"
#include "rfg/detect.hpp"
#include "rfg/finite_group.hpp"
#include "support.hpp"

using namespace rfg;
using testing_support::catalog16;

namespace {

FiniteGroupTable from_oracle(const oracle::Table& t) {
  const std::size_t n = t.size();
  std::vector<Elem> mul(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a * n + b] = static_cast<Elem>(t[a][b]);
  std::vector<Elem> gens;
  for (std::size_t a = 1; a < n; ++a) gens.push_back(static_cast<Elem>(a));
  return FiniteGroupTable::from_table(n, std::move(mul), std::move(gens));
}

FiniteGroupTable perm_group(std::initializer_list<Perm> gens, std::size_t degree) {
  std::vector<Perm> g(gens);
  return permutation_closure(g, degree);
}

const GeneratorAlphabet kXY = GeneratorAlphabet::xy();

}  // namespace

TEST(FiniteGroup, PermutationClosureOrders) {
  auto s3 = perm_group({Perm::from_cycles(3, {{1, 2}}), Perm::from_cycles(3, {{1, 2, 3}})}, 3);
  EXPECT_EQ(s3.order(), 6u);
  EXPECT_FALSE(s3.is_abelian());
  auto q8_like = perm_group({Perm::from_cycles(8, {{1, 2, 3, 4}, {5, 6, 7, 8}}), Perm::from_cycles(8, {{1, 5, 3, 7}, {2, 8, 4, 6}})}, 8);
  EXPECT_EQ(q8_like.order(), 8u);
  EXPECT_EQ(q8_like.center_size(), 2u);
}

TEST(FiniteGroup, ClosureCapIsEnforced) {
  std::vector<Perm> g{Perm::from_cycles(6, {{1, 2}}), Perm::from_cycles(6, {{1, 2, 3, 4, 5, 6}})};
  EXPECT_THROW(permutation_closure(g, 6, 100), ResourceError);
}

TEST(FiniteGroup, SeriesUseZeroBasedIndexing) {
  auto d8 = perm_group({Perm::from_cycles(4, {{1, 2, 3, 4}}), Perm::from_cycles(4, {{1, 3}})}, 4);
  EXPECT_EQ(nilpotency_class(d8), 2);
  EXPECT_EQ(derived_length(d8), 2);
  auto s3 = perm_group({Perm::from_cycles(3, {{1, 2}}), Perm::from_cycles(3, {{1, 2, 3}})}, 3);
  EXPECT_FALSE(nilpotency_class(s3).has_value());
  EXPECT_EQ(derived_length(s3), 2);
  EXPECT_EQ(nilpotency_class(FiniteGroupTable::trivial()), 0);
  auto c5 = perm_group({Perm::from_cycles(5, {{1, 2, 3, 4, 5}})}, 5);
  EXPECT_EQ(nilpotency_class(c5), 1);
  EXPECT_EQ(derived_length(c5), 1);
}

TEST(FiniteGroup, FromTableRejectsNonGroups) {
  std::vector<Elem> bad{0, 1, 1, 1};
  EXPECT_THROW(FiniteGroupTable::from_table(2, bad, {1}), InputError);
}

TEST(FiniteGroup, AutomorphismCounts) {
  const auto& c = catalog16();
  for (const auto& g : c.groups()) {
    if (g.order() == 6 && !g.abelian()) {
      EXPECT_EQ(g.aut_order, 6u);
    }
    if (g.order() == 7) {
      EXPECT_EQ(g.aut_order, 6u);
    }
    if (g.order() == 4) {
      bool cyclic = false;
      for (Elem e = 0; e < 4; ++e) cyclic = cyclic || g.table.element_order(e) == 4;
      EXPECT_EQ(g.aut_order, cyclic ? 2u : 6u);
    }
    if (g.order() == 8 && !g.abelian()) {
      std::size_t fours = 0;
      for (Elem e = 0; e < 8; ++e) fours += g.table.element_order(e) == 4;
      EXPECT_EQ(g.aut_order, fours == 6 ? 24u : 8u);  // Q8 or D4
    }
  }
}

TEST(Catalog, CountsMatchWreathUniverseOracle) {
  const auto oracle_groups = oracle::small_groups(16);
  const auto counts = catalog16().class_counts();
  for (int n = 1; n <= 16; ++n) EXPECT_EQ(counts[n], oracle_groups[n].size()) << "order " << n;
  EXPECT_EQ(counts[8], 5u);
  EXPECT_EQ(counts[16], 14u);
}

TEST(Catalog, EveryOracleGroupIsIdentifiedOnce) {
  const auto oracle_groups = oracle::small_groups(16);
  const auto& c = catalog16();
  for (int n = 1; n <= 16; ++n) {
    std::set<std::size_t> hit;
    for (const auto& t : oracle_groups[n]) {
      auto idx = c.identify(from_oracle(t));
      ASSERT_TRUE(idx.has_value()) << "order " << n;
      EXPECT_TRUE(hit.insert(*idx).second) << "two oracle classes map to one catalog entry at order " << n;
    }
  }
}

TEST(Catalog, EntriesArePairwiseNonIsomorphic) {
  const auto& c = catalog16();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size() && c.at(j).order() == c.at(i).order(); ++j)
      EXPECT_FALSE(isomorphic(c.at(i).table, c.at(j).table)) << c.label(i) << " vs " << c.label(j);
}

TEST(Catalog, JsonRoundTripAndVersioning) {
  const auto c = catalog_build(8);
  auto j = catalog_to_json(c);
  auto back = catalog_from_json(j, 8);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->class_counts(), c.class_counts());
  j["version"] = kCatalogFormatVersion + 1;
  EXPECT_FALSE(catalog_from_json(j, 8).has_value());
  EXPECT_FALSE(catalog_from_json(catalog_to_json(c), 9).has_value());
}

TEST(Catalog, BoundLimits) {
  EXPECT_THROW(catalog_build(0), InputError);
  EXPECT_THROW(catalog_build(kCatalogMaxBound + 1), ResourceError);
  EXPECT_EQ(catalog_build(1).size(), 1u);
}

TEST(Detect, CommutatorValues) {
  const auto f = GroupFamily::free(2);
  const Element c = parse_element(f, "[x,y]");
  auto any = detect(f, c, PropertyP::any(), catalog16());
  auto nil = detect(f, c, PropertyP::nilpotent(), catalog16());
  auto sol = detect(f, c, PropertyP::solvable(), catalog16());
  ASSERT_TRUE(any.resolved() && nil.resolved() && sol.resolved());
  EXPECT_EQ(*any.value, 6u);
  EXPECT_EQ(*sol.value, 6u);
  EXPECT_EQ(*nil.value, 8u);
  const auto& Q = catalog16().at(nil.witness->group_index).table;
  EXPECT_NE(evaluate_word(Q, nil.witness->images, std::get<Word>(c)), Q.identity());
  EXPECT_TRUE(nilpotency_class(Q).has_value());
}

TEST(Detect, GeneratorPowersFollowMinimalNonDivisor) {
  const auto f = GroupFamily::free(2);
  for (long long m = 1; m <= 16; ++m) {
    auto d = detect(f, Element{Word::generator(0).pow(m)}, PropertyP::any(), catalog16());
    ASSERT_TRUE(d.resolved());
    EXPECT_EQ(static_cast<long long>(*d.value), oracle::min_non_divisor(m)) << "x^" << m;
  }
}

TEST(Detect, IntegerLine) {
  const auto z = GroupFamily::integer_line();
  for (long long m : {1LL, 2LL, 6LL, 12LL, -12LL, 60LL}) {
    auto d = detect(z, Element{m}, PropertyP::any(), catalog16());
    EXPECT_EQ(static_cast<long long>(*d.value), oracle::min_non_divisor(m)) << m;
  }
  EXPECT_THROW(detect(z, Element{0LL}, PropertyP::any(), catalog16()), InputError);
}

TEST(Detect, PropertyMonotonicityOnShortWords) {
  const auto f = GroupFamily::free(2);
  for (const auto& b : ball_enumerate(f, 3)) {
    auto a = detect(f, b.element, PropertyP::any(), catalog16());
    auto s = detect(f, b.element, PropertyP::solvable(), catalog16());
    auto n = detect(f, b.element, PropertyP::nilpotent(), catalog16());
    ASSERT_TRUE(a.resolved() && s.resolved() && n.resolved());
    EXPECT_LE(*a.value, *s.value);
    EXPECT_LE(*s.value, *n.value);
  }
}

TEST(Detect, PGroupProperty) {
  const auto f = GroupFamily::free(2);
  auto d = detect(f, parse_element(f, "x^2"), PropertyP::p_group(2), catalog16());
  EXPECT_EQ(*d.value, 4u);
  auto d3 = detect(f, parse_element(f, "x^3"), PropertyP::p_group(3), catalog16());
  EXPECT_EQ(*d3.value, 9u);
  EXPECT_THROW(PropertyP::parse("p4"), InputError);
  EXPECT_EQ(PropertyP::parse("p5").name(), "p5");
}

TEST(Detect, SurfaceCommutator) {
  // [a1,b1] survives in S3 via a2 = b1, b2 = a1; no abelian quotient sees it.
  const auto f = GroupFamily::surface();
  auto d = detect(f, parse_element(f, "[a1,b1]"), PropertyP::any(), catalog16());
  EXPECT_EQ(*d.value, 6u);
  auto g = detect(f, parse_element(f, "a1"), PropertyP::any(), catalog16());
  EXPECT_EQ(*g.value, 2u);
}

TEST(Detect, UnresolvedReportsBound) {
  const auto f = GroupFamily::free(2);
  auto d = detect(f, parse_element(f, "[x,y]"), PropertyP::nilpotent(), catalog_build(7));
  EXPECT_FALSE(d.resolved());
  EXPECT_EQ(d.display(), "> 7");
}

TEST(Detect, DeterministicAcrossJobCounts) {
  const auto f = GroupFamily::free(2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    Word w = testing_support::random_word(rng, 2, 6);
    if (w.empty()) continue;
    auto a = detect(f, Element{w}, PropertyP::any(), catalog16(), 1);
    auto b = detect(f, Element{w}, PropertyP::any(), catalog16(), 4);
    EXPECT_EQ(a.value, b.value);
    if (a.witness) {
      EXPECT_EQ(a.witness->group_index, b.witness->group_index);
      EXPECT_EQ(a.witness->images, b.witness->images);
    }
  }
}

TEST(Detect, ConsistencyWithNilpotentQuotients) {
  // A witness in a nilpotent group of class c means the word is not in the
  // c-th lower central term, i.e. its Magnus depth is at most c.
  const auto f = GroupFamily::free(2);
  auto d = detect(f, parse_element(f, "[[x,y],x]"), PropertyP::nilpotent(), catalog16());
  ASSERT_TRUE(d.resolved());
  EXPECT_GE(*nilpotency_class(catalog16().at(d.witness->group_index).table), 3);
  EXPECT_EQ(*d.value, 16u);
}

TEST(HomCheck, LamplighterRelations) {
  const auto lamp = GroupFamily::lamplighter(2);
  const auto& c = catalog16();
  // in an abelian group every assignment with alpha^2 = 1 respects the relations
  for (const auto& g : c.groups()) {
    if (!g.abelian()) continue;
    const Elem n = static_cast<Elem>(g.order());
    for (Elem a = 0; a < n; ++a)
      for (Elem t = 0; t < n; ++t) {
        std::vector<Elem> im{a, t};
        EXPECT_EQ(hom_check(lamp, g.table, im), g.table.mul(a, a) == g.table.identity());
      }
  }
  EXPECT_THROW(hom_check(lamp, c.at(0).table, std::vector<Elem>{0}), InputError);
}

TEST(NormalSubgroups, MatchActionCounting) {
  for (int n = 1; n <= 6; ++n)
    EXPECT_EQ(normal_subgroup_count(n, catalog16()), oracle::normal_subgroups_by_actions(n)) << "index " << n;
}

TEST(NormalSubgroups, KnownValues) {
  const std::vector<std::size_t> expect{1, 3, 4, 7, 6, 15};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(normal_subgroup_count(n, catalog16()), expect[n - 1]);
  EXPECT_THROW(normal_subgroup_count(17, catalog16()), ResourceError);
  EXPECT_THROW(normal_subgroup_count(0, catalog16()), InputError);
}
