#include <gtest/gtest.h>

#include <random>

#include "rfg/catalog.hpp"
#include "rfg/detect.hpp"
#include "rfg/magnus.hpp"
#include "support.hpp"

using namespace rfg;

namespace {

const GeneratorAlphabet kXY = GeneratorAlphabet::xy();
Monomial mono(std::initializer_list<int> v) {
  Monomial m;
  for (int x : v) m.vars.push_back(static_cast<std::uint8_t>(x));
  return m;
}

}  // namespace

TEST(Magnus, Generators) {
  auto s = expand(parse_word("x", kXY), 4);
  EXPECT_EQ(s.to_string(), "1 + X1");
  auto inv = expand(parse_word("x^-1", kXY), 4);
  EXPECT_EQ(inv.to_string(), "1 - X1 + X1*X1 - X1*X1*X1 + X1*X1*X1*X1");
  EXPECT_EQ(expand(Word{}, 3), TruncatedSeries::one(3, 2));
}

TEST(Magnus, CommutatorLeadingTerm) {
  auto r = lcs_depth(parse_word("[x,y]", kXY), 4);
  ASSERT_TRUE(r.depth.has_value());
  EXPECT_EQ(*r.depth, 2);
  ASSERT_EQ(r.leading.size(), 2u);
  EXPECT_EQ(r.leading.at(mono({0, 1})), 1);
  EXPECT_EQ(r.leading.at(mono({1, 0})), -1);
}

TEST(Magnus, HomomorphismProperty) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    Word a = testing_support::random_word(rng, 2, 7), b = testing_support::random_word(rng, 2, 7);
    EXPECT_EQ(expand(a * b, 5), expand(a, 5) * expand(b, 5));
    EXPECT_EQ(expand(a * a.inverse(), 5), TruncatedSeries::one(5, 2));
  }
}

TEST(Magnus, CommutatorDepthsAdd) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    Word a = testing_support::random_word(rng, 2, 5), b = testing_support::random_word(rng, 2, 5);
    Word c = commutator(a, b);
    if (a.empty() || b.empty() || c.empty()) continue;
    auto da = lcs_depth(a, 8), db = lcs_depth(b, 8), dc = lcs_depth(c, 8);
    if (da.depth && db.depth && *da.depth + *db.depth <= 8) {
      ASSERT_TRUE(dc.depth.has_value() || *da.depth + *db.depth > 8);
      if (dc.depth) {
        EXPECT_GE(*dc.depth, *da.depth + *db.depth);
      }
    }
  }
}

TEST(Magnus, WordsUn) {
  EXPECT_EQ(format_word(build_u(1), kXY), "x^-1 x^-1 y^-1 x");
  EXPECT_EQ(build_u(2).length(), 12u);
  EXPECT_EQ(build_u(3).length(), 52u);
  EXPECT_EQ(build_u(4).length(), 212u);
  EXPECT_THROW(build_u(0), InputError);
  EXPECT_THROW(build_u(7), ResourceError);
}

TEST(Magnus, DepthsOfUn) {
  EXPECT_EQ(lcs_depth(build_u(1), 8).depth, 1);
  EXPECT_EQ(lcs_depth(build_u(2), 8).depth, 3);
  EXPECT_EQ(lcs_depth(build_u(3), 8).depth, 7);
  auto capped = lcs_depth(build_u(3), 6);
  EXPECT_FALSE(capped.depth.has_value());
  EXPECT_EQ(capped.depth_display(), ">= 7");
}

TEST(Magnus, DoublingCheck) {
  auto r = depth_doubling_check(3, 8);
  EXPECT_EQ(r.overall, CheckStatus::Pass);
  ASSERT_EQ(r.pair_status.size(), 2u);
  auto low = depth_doubling_check(3, 2);
  EXPECT_EQ(low.overall, CheckStatus::Inconclusive);
}

TEST(Magnus, DepthBoundsNilpotentDetection) {
  // A nilpotent group of class c kills the c-th lower central term, so
  // detection by class c forces depth <= c.
  const auto& cat = testing_support::catalog16();
  const auto f = GroupFamily::free(2);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    Word w = testing_support::random_word(rng, 2, 8);
    if (w.empty()) continue;
    auto d = detect(f, Element{w}, PropertyP::nilpotent(), cat);
    if (!d.resolved()) continue;
    auto dep = lcs_depth(w, 8);
    ASSERT_TRUE(dep.depth.has_value());
    EXPECT_LE(*dep.depth, *nilpotency_class(cat.at(d.witness->group_index).table));
  }
}

TEST(Magnus, Errors) {
  EXPECT_THROW(lcs_depth(Word{}, 4), InputError);
  EXPECT_THROW(TruncatedSeries(0, 2), InputError);
  EXPECT_THROW(expand(build_u(4), 8, 2, 100), ResourceError);
  EXPECT_THROW(expand(Word::generator(2), 3, 2), InputError);
}
