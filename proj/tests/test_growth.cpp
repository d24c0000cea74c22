#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "oracles.hpp"
#include "rfg/config.hpp"
#include "rfg/growth.hpp"
#include "support.hpp"

using namespace rfg;
using testing_support::catalog16;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("rfgrowth-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

GrowthRecord sample_record(long long n) {
  GrowthRecord r;
  r.family = "free2";
  r.prop = "any";
  r.n = n;
  r.F = static_cast<std::size_t>(n + 1);
  r.lower_bound = n % 3 == 0;
  r.witness = n % 2 ? "[x,y]" : "x y, \"quoted\"";
  r.witness_length = n;
  r.quotient_order = static_cast<std::size_t>(n);
  r.elapsed_us = 10 * n;
  return r;
}

}  // namespace

TEST(Growth, IntegerLineClosedForm) {
  const auto t = growth_table(GroupFamily::integer_line(), PropertyP::any(), 50, catalog16());
  ASSERT_EQ(t.rows.size(), 50u);
  std::size_t expect = 1;
  for (long long n = 1; n <= 50; ++n) {
    expect = std::max<std::size_t>(expect, oracle::min_non_divisor(n));
    EXPECT_EQ(t.rows[n - 1].F, expect) << "n=" << n;
    EXPECT_FALSE(t.rows[n - 1].lower_bound);
  }
  EXPECT_EQ(t.rows[0].F, 2u);
  EXPECT_EQ(t.rows[5].F, 4u);
}

TEST(Growth, FreeGroupSmallValues) {
  const auto t = growth_table(GroupFamily::free(2), PropertyP::any(), 4, catalog16());
  EXPECT_EQ(t.rows[0].F, 2u);
  EXPECT_EQ(t.rows[1].F, 3u);
  EXPECT_EQ(t.rows[3].F, 6u);
  const auto nil = growth_table(GroupFamily::free(2), PropertyP::nilpotent(), 3, catalog16());
  EXPECT_EQ(nil.rows[0].F, 2u);
  EXPECT_EQ(nil.rows[1].F, 3u);
  EXPECT_EQ(nil.rows[2].F, 3u);
}

TEST(Growth, LamplighterBallSizeMatchesBfs) {
  // Z/2 wr Z: a is an involution, so the radius-1 ball is {1, a, t, t^-1}.
  EXPECT_EQ(word_growth(GroupFamily::lamplighter(2), 1), 4u);
  const auto dist = oracle::lamplighter_bfs(2, 4);
  for (long long n = 0; n <= 4; ++n) {
    std::size_t count = 0;
    for (const auto& [s, d] : dist) count += d <= n;
    EXPECT_EQ(word_growth(GroupFamily::lamplighter(2), n), count) << "n=" << n;
  }
}

TEST(Growth, MonotoneInNAndInProperty) {
  const auto f = GroupFamily::free(2);
  const auto any = growth_table(f, PropertyP::any(), 4, catalog16());
  const auto sol = growth_table(f, PropertyP::solvable(), 4, catalog16());
  const auto nil = growth_table(f, PropertyP::nilpotent(), 4, catalog16());
  for (std::size_t i = 0; i < 4; ++i) {
    if (i) {
      EXPECT_GE(any.rows[i].F, any.rows[i - 1].F);
      EXPECT_GE(nil.rows[i].F, nil.rows[i - 1].F);
    }
    EXPECT_LE(any.rows[i].F, sol.rows[i].F);
    EXPECT_LE(sol.rows[i].F, nil.rows[i].F);
  }
}

TEST(Growth, WitnessesAttainTheValue) {
  const auto f = GroupFamily::free(2);
  const auto t = growth_table(f, PropertyP::any(), 4, catalog16());
  for (const auto& r : t.rows) {
    if (r.lower_bound || r.witness.empty()) continue;
    const auto e = parse_element(f, r.witness);
    EXPECT_LE(word_length(f, e).value, r.n);
    EXPECT_EQ(detect(f, e, PropertyP::any(), catalog16()).value, r.F);
  }
}

TEST(Growth, UnresolvedRowsAreLowerBounds) {
  const auto small = catalog_build(5);
  const auto t = growth_table(GroupFamily::free(2), PropertyP::any(), 4, small);
  EXPECT_FALSE(t.rows[1].lower_bound);
  EXPECT_TRUE(t.rows[3].lower_bound);  // [x,y] needs order 6
  EXPECT_EQ(t.rows[3].F, 6u);
  EXPECT_EQ(t.rows[3].display(), ">= 6");
}

TEST(Growth, ZeroRadiusAndErrors) {
  EXPECT_TRUE(growth_table(GroupFamily::free(2), PropertyP::any(), 0, catalog16()).rows.empty());
  EXPECT_THROW(growth_table(GroupFamily::free(2), PropertyP::any(), -1, catalog16()), InputError);
  EXPECT_THROW(growth_F(GroupFamily::free(2), PropertyP::any(), 0, catalog16()), InputError);
}

TEST(Growth, DeterministicAcrossJobs) {
  const auto f = GroupFamily::surface();
  auto a = growth_table(f, PropertyP::any(), 2, catalog16(), nullptr, 1);
  auto b = growth_table(f, PropertyP::any(), 2, catalog16(), nullptr, 4);
  EXPECT_EQ(table_export(a, TableFormat::Csv, false), table_export(b, TableFormat::Csv, false));
}

TEST(Inequality3, SmallRadii) {
  for (long long n : {0, 1, 2}) {
    const auto rep = inequality3_check(n, catalog16());
    EXPECT_EQ(rep.status, CheckStatus::Pass) << "n=" << n;
    EXPECT_EQ(rep.w, oracle::free_ball_by_raw_words(2, static_cast<int>(n)));
  }
  const auto r1 = inequality3_check(1, catalog16());
  EXPECT_EQ(r1.w, 5u);
  EXPECT_EQ(r1.F2n, 3u);
  EXPECT_EQ(r1.s, 4u);
}

TEST(Serialization, CsvAndJsonRoundTrip) {
  for (std::size_t rows : {0u, 1u, 10u}) {
    GrowthTable t;
    t.config = {{"family", "free2"}, {"catalog_bound", 16}};
    for (std::size_t i = 1; i <= rows; ++i) t.rows.push_back(sample_record(static_cast<long long>(i)));
    for (auto fmt : {TableFormat::Csv, TableFormat::Json}) {
      const auto text = table_export(t, fmt);
      EXPECT_EQ(table_import(text, fmt), t) << rows << " rows";
    }
  }
}

TEST(Serialization, CsvLayoutAndErrors) {
  GrowthTable t;
  t.rows.push_back(sample_record(2));
  const auto text = table_export(t, TableFormat::Csv, false);
  EXPECT_EQ(text.substr(0, 9), "# config ");
  EXPECT_NE(text.find(std::string(kGrowthCsvHeader) + "\n"), std::string::npos);
  EXPECT_NE(text.find("\"x y, \"\"quoted\"\"\""), std::string::npos);
  EXPECT_NE(text.find(",0\n"), std::string::npos);  // timing column zeroed
  EXPECT_THROW(table_import("a,b\n", TableFormat::Csv), InputError);
  EXPECT_THROW(table_import("", TableFormat::Csv), InputError);
  EXPECT_THROW(table_import(std::string(kGrowthCsvHeader) + "\n1,2\n", TableFormat::Csv), InputError);
  EXPECT_THROW(table_import("{", TableFormat::Json), InputError);
  EXPECT_THROW(parse_table_format("xml"), InputError);
}

TEST(LogLogFit, ConstantTableHasZeroSlope) {
  GrowthTable t;
  for (long long n = 1; n <= 8; ++n) {
    GrowthRecord r;
    r.n = n;
    r.F = 5;
    t.rows.push_back(r);
  }
  const auto fit = loglog_fit(t);
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(5.0), 1e-12);
  EXPECT_EQ(fit.used, 7u);
  EXPECT_EQ(fit.excluded, 1u);
}

TEST(LogLogFit, RecoversKnownSlopeAndSkipsLowerBounds) {
  GrowthTable t;
  for (long long n = 2; n <= 40; ++n) {
    GrowthRecord r;
    r.n = n;
    r.F = static_cast<std::size_t>(std::lround(std::exp(1.0 + 2.0 * std::log(std::log(double(n)))) * 1000));
    r.lower_bound = n == 20;
    if (r.lower_bound) r.F = 1;
    t.rows.push_back(r);
  }
  const auto fit = loglog_fit(t);
  EXPECT_NEAR(fit.slope, 2.0, 1e-3);
  EXPECT_EQ(fit.excluded, 1u);
  GrowthTable few;
  few.rows = {t.rows[0], t.rows[1]};
  EXPECT_THROW(loglog_fit(few), InputError);
}

TEST(Cache, WarmRunMatchesColdRun) {
  const auto dir = scratch_dir("cache");
  const auto file = dir / "detect.json";
  const auto f = GroupFamily::free(2);
  std::string cold, warm;
  {
    DetectionCache c(file);
    cold = table_export(growth_table(f, PropertyP::solvable(), 3, catalog16(), &c), TableFormat::Csv, false);
    EXPECT_GT(c.size(), 0u);
    c.save();
  }
  {
    DetectionCache c(file);
    EXPECT_GT(c.size(), 0u);
    warm = table_export(growth_table(f, PropertyP::solvable(), 3, catalog16(), &c), TableFormat::Csv, false);
    EXPECT_EQ(c.hits(), c.size());
  }
  EXPECT_EQ(cold, warm);
  std::filesystem::remove_all(dir);
}

TEST(Cache, KeysSeparateBoundsAndVersionMismatchIsIgnored) {
  const auto f = GroupFamily::free(2);
  const auto e = parse_element(f, "[x,y]");
  EXPECT_NE(DetectionCache::key(f, e, PropertyP::any(), 16), DetectionCache::key(f, e, PropertyP::any(), 8));
  EXPECT_NE(DetectionCache::key(f, e, PropertyP::any(), 16), DetectionCache::key(f, e, PropertyP::nilpotent(), 16));

  const auto dir = scratch_dir("version");
  const auto file = dir / "detect.json";
  std::ofstream(file) << R"({"format":"rfgrowth-detect-cache","version":99,"entries":{"k":{"value":3,"group":0,"images":[]}}})";
  EXPECT_EQ(DetectionCache(file).size(), 0u);
  std::ofstream(file) << "not json";
  EXPECT_EQ(DetectionCache(file).size(), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Config, MergeAndValidate) {
  RunConfig c;
  c.merge({{"bound", 12}, {"seed", 7}, {"format", "json"}});
  EXPECT_EQ(c.bound, 12);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.snapshot().count("jobs"), 0u);
  EXPECT_THROW(c.merge({{"nonsense", 1}}), InputError);
  EXPECT_THROW(c.merge({{"bound", "x"}}), InputError);
  EXPECT_THROW(c.merge(nlohmann::json::array()), InputError);
  RunConfig bad;
  bad.bound = 40;
  EXPECT_THROW(bad.validate(), InputError);
  bad = RunConfig{};
  bad.format = "xml";
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Config, MergeFile) {
  const auto dir = scratch_dir("config");
  std::ofstream(dir / "c.json") << R"({"bound": 9, "jobs": 3})";
  RunConfig c;
  c.merge_file(dir / "c.json");
  EXPECT_EQ(c.bound, 9);
  EXPECT_EQ(c.jobs, 3u);
  std::ofstream(dir / "bad.json") << "{";
  EXPECT_THROW(c.merge_file(dir / "bad.json"), InputError);
  EXPECT_THROW(c.merge_file(dir / "missing.json"), InputError);
  std::filesystem::remove_all(dir);
}
