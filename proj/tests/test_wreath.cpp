#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rfg/detect.hpp"
#include "rfg/wreath.hpp"
#include "rfg/wreath_floor.hpp"
#include "support.hpp"

using namespace rfg;
using testing_support::catalog16;

namespace {

WreathElement random_wreath(std::mt19937_64& rng, LampRing ring) {
  std::uniform_int_distribution<long long> pos(-4, 4), coef(-3, 3), count(0, 4);
  std::map<long long, long long> sup;
  for (long long i = count(rng); i > 0; --i) sup[pos(rng)] = coef(rng);
  return WreathElement(sup, pos(rng), ring);
}

}  // namespace

TEST(WreathElement, MultiplicationLaw) {
  const LampRing z2{2};
  auto a = WreathElement::a(z2), t = WreathElement::t(z2);
  EXPECT_EQ(a * t * a * t.inverse(), WreathElement({{0, 1}, {1, 1}}, 0, z2));  // t shifts right
  EXPECT_EQ(a * a, WreathElement({}, 0, z2));
  EXPECT_TRUE((t * t.inverse()).is_identity());
}

TEST(WreathElement, GroupLawsProperty) {
  std::mt19937_64 rng(17);
  for (LampRing ring : {LampRing{2}, LampRing{5}, LampRing{0}}) {
    for (int k = 0; k < 200; ++k) {
      auto x = random_wreath(rng, ring), y = random_wreath(rng, ring), z = random_wreath(rng, ring);
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_TRUE((x * x.inverse()).is_identity());
      for (const auto& [pos, c] : x.support()) EXPECT_NE(c, 0);
    }
  }
}

TEST(WreathElement, FormatParseRoundTrip) {
  std::mt19937_64 rng(2);
  for (LampRing ring : {LampRing{3}, LampRing{0}}) {
    for (int k = 0; k < 100; ++k) {
      auto x = random_wreath(rng, ring);
      EXPECT_EQ(parse_wreath(format_wreath(x), ring), x);
    }
  }
  EXPECT_THROW(parse_wreath("1; 0:", LampRing{2}), InputError);
}

TEST(WreathLength, SmallValues) {
  const LampRing z2{2};
  EXPECT_EQ(wreath_word_length(WreathElement({}, 0, z2)), 0);
  EXPECT_EQ(wreath_word_length(WreathElement::a(z2)), 1);
  EXPECT_EQ(wreath_word_length(WreathElement::t(z2, -3)), 3);
  EXPECT_EQ(wreath_word_length(WreathElement({{0, 3}}, 0, LampRing{5})), 2);
  EXPECT_EQ(wreath_word_length(WreathElement({{0, -4}}, 0, LampRing{0})), 4);
}

TEST(WreathLength, MatchesCayleyGraphBfs) {
  for (int p : {2, 3}) {
    const int R = 2;
    const auto dist = oracle::lamplighter_bfs(p, R);
    std::size_t checked = 0;
    for (const auto& [state, d] : dist) {
      std::map<long long, long long> sup;
      for (int i = 0; i <= 2 * R; ++i)
        if (state.lamps[i]) sup[i - R] = state.lamps[i];
      WreathElement e(sup, state.head, LampRing{p});
      EXPECT_EQ(wreath_word_length(e), d) << format_wreath(e);
      EXPECT_EQ(wreath_from_word(wreath_geodesic_word(e), LampRing{p}), e);
      EXPECT_EQ(static_cast<int>(wreath_geodesic_word(e).length()), d);
      ++checked;
    }
    EXPECT_EQ(checked, static_cast<std::size_t>(std::pow(p, 2 * R + 1)) * (2 * R + 1));
  }
}

TEST(WreathLength, LowerBoundsProperty) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 300; ++k) {
    auto e = random_wreath(rng, LampRing{0});
    const long long len = wreath_word_length(e);
    EXPECT_GE(len, static_cast<long long>(e.support().size()));
    if (!e.support().empty()) {
      EXPECT_GE(len, e.support().rbegin()->first - e.support().begin()->first);
    }
  }
}

TEST(APMatrix, Rows) {
  auto A = build_ap_matrix(2);
  ASSERT_EQ(A.rows(), 3u);
  ASSERT_EQ(A.cols(), 6u);
  auto row = [&](std::size_t i) {
    std::string s;
    for (auto x : A.row(i)) s += static_cast<char>('0' + x);
    return s;
  };
  EXPECT_EQ(row(0), "111111");
  EXPECT_EQ(row(1), "101010");
  EXPECT_EQ(row(2), "010101");
  auto B = build_ap_matrix(3);
  EXPECT_EQ(B.rows(), 6u);
  std::string r3;
  for (std::size_t i = 3; i < 6; ++i) r3 += std::string(1, '0' + B.at(i, 0)) + std::string(1, '0' + B.at(i, 1)) + std::string(1, '0' + B.at(i, 2)) + " ";
  EXPECT_EQ(r3, "100 010 001 ");
  auto C = build_ap_matrix(1);
  EXPECT_EQ(C.rows(), 1u);
  EXPECT_EQ(C.cols(), 2u);
  EXPECT_THROW(build_ap_matrix(0), InputError);
}

TEST(Kernel, ModPExamples) {
  auto A = build_ap_matrix(2);
  for (long long x : A.apply({1, 1, 1, 1, 0, 0}, 2)) EXPECT_EQ(x, 0);
  for (int n = 1; n <= 7; ++n)
    for (long long p : {2LL, 3LL, 5LL}) {
      auto v = kernel_mod_p(build_ap_matrix(n), p);
      bool nonzero = false;
      for (long long x : v.w) nonzero = nonzero || x != 0;
      EXPECT_TRUE(nonzero);
      for (long long x : build_ap_matrix(n).apply(v.w, p)) EXPECT_EQ(x, 0);
      const long long m = static_cast<long long>(v.m);
      EXPECT_LT(wreath_word_length(v.v), 2 * m * (p + 2)) << "n=" << n << " p=" << p;
      for (long long r = 1; r <= n; ++r)
        for (long long c : ap_collapse(v.v, r)) EXPECT_EQ(c, 0);
    }
  EXPECT_THROW(kernel_mod_p(build_ap_matrix(2), 4), InputError);
}

TEST(Kernel, SmallIntegerKernelMeetsPigeonholeBound) {
  for (int n = 1; n <= 6; ++n) {
    auto A = build_ap_matrix(n);
    auto v = small_integer_kernel(A);
    const long long m = static_cast<long long>(v.m);
    EXPECT_LE(v.sup_norm(), m + 2);
    for (long long x : A.apply(v.w)) EXPECT_EQ(x, 0);
    EXPECT_LT(wreath_word_length(v.v), 2 * m * (m + 4));
  }
}

TEST(Kernel, SmallIntegerKernelIsNormMinimal) {
  for (int n : {1, 2}) {
    auto A = build_ap_matrix(n);
    std::vector<std::vector<int>> rows;
    for (std::size_t i = 0; i < A.rows(); ++i) rows.emplace_back(A.row(i).begin(), A.row(i).end());
    EXPECT_EQ(small_integer_kernel(A).sup_norm(), oracle::min_kernel_sup_norm(rows, 2)) << "n=" << n;
  }
}

TEST(Collapse, Examples) {
  const LampRing z2{2};
  EXPECT_EQ(ap_collapse(WreathElement::a(z2), 1), std::vector<long long>{1});
  EXPECT_EQ(ap_collapse(WreathElement({{0, 1}, {2, 1}}, 0, z2), 2), (std::vector<long long>{0, 0}));
  EXPECT_THROW(ap_collapse(WreathElement::a(z2), 0), InputError);
}

TEST(Floor, NoSmallQuotientDetectsCandidate) {
  for (int n = 2; n <= 8; ++n)
    for (long long p : {2LL, 3LL}) {
      auto v = kernel_mod_p(build_ap_matrix(n), p);
      auto rep = detection_floor_verify(v, n, catalog16());
      EXPECT_TRUE(rep.passed()) << "n=" << n << " p=" << p;
    }
  for (int n = 2; n <= 5; ++n) {
    auto v = small_integer_kernel(build_ap_matrix(n));
    EXPECT_TRUE(detection_floor_verify(v, n, catalog16()).passed()) << "n=" << n;
  }
}

TEST(Floor, ReportsCounterexamplesForNonKernelElements) {
  KernelCandidate fake{3, 6, 2, {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, WreathElement::lamp(1, 1, LampRing{2})};
  auto rep = detection_floor_verify(fake, 3, catalog16());
  EXPECT_FALSE(rep.passed());
}

TEST(Floor, CatalogTooSmall) {
  auto v = kernel_mod_p(build_ap_matrix(5), 2);
  EXPECT_THROW(detection_floor_verify(v, 5, catalog_build(3)), ResourceError);
}

TEST(Floor, ExplicitDetectorOrderAtLeastN) {
  for (int n = 2; n <= 6; ++n) {
    auto v = kernel_mod_p(build_ap_matrix(n), 2);
    auto e = explicit_detector(v);
    ASSERT_TRUE(e.has_value());
    EXPECT_GT(e->period, n);
    auto c = ap_collapse(v.v, e->period);
    EXPECT_TRUE(std::any_of(c.begin(), c.end(), [](long long x) { return x != 0; }));
  }
}
