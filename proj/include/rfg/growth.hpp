#pragma once

// Residual finiteness growth F^P(n) over word-metric balls, word growth,
// the ball-size inequality for the free group of rank 2, table serialization
// and a diagnostic log-log fit.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfg/catalog.hpp"
#include "rfg/detect.hpp"
#include "rfg/errors.hpp"
#include "rfg/family.hpp"
#include "rfg/parallel.hpp"
#include "rfg/status.hpp"

namespace rfg {

// ---------------------------------------------------------------------------
// Detection cache.

struct CachedDetection {
  std::optional<std::size_t> value;
  std::size_t group_index = 0;
  std::vector<Elem> images;
};

/// D-values keyed by (family, element, property, catalog bound). Access is
/// serialized; the on-disk file is versioned and ignored on mismatch.
class DetectionCache {
 public:
  static constexpr int kVersion = 1;

  DetectionCache() = default;
  explicit DetectionCache(std::filesystem::path file) : file_(std::move(file)) { load(); }

  static std::string key(const GroupFamily& f, const Element& e, const PropertyP& P, int bound) {
    return f.name() + "|" + format_element(f, e) + "|" + P.name() + "|B" + std::to_string(bound);
  }

  std::optional<CachedDetection> get(const std::string& k) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    ++hits_;
    return it->second;
  }

  void put(const std::string& k, CachedDetection d) {
    std::lock_guard lock(mu_);
    entries_[k] = std::move(d);
    dirty_ = true;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }
  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }

  void save() const {
    std::lock_guard lock(mu_);
    if (file_.empty() || !dirty_) return;
    nlohmann::json j;
    j["format"] = "rfgrowth-detect-cache";
    j["version"] = kVersion;
    j["entries"] = nlohmann::json::object();
    for (const auto& [k, d] : entries_) {
      nlohmann::json e;
      e["value"] = d.value ? nlohmann::json(*d.value) : nlohmann::json(nullptr);
      e["group"] = d.group_index;
      e["images"] = d.images;
      j["entries"][k] = std::move(e);
    }
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_);
    out << j.dump();
    dirty_ = false;
  }

 private:
  void load() {
    if (!std::filesystem::exists(file_)) return;
    try {
      std::ifstream in(file_);
      auto j = nlohmann::json::parse(in);
      if (j.value("format", "") != "rfgrowth-detect-cache" || j.value("version", -1) != kVersion) return;
      for (const auto& [k, e] : j.at("entries").items()) {
        CachedDetection d;
        if (!e.at("value").is_null()) d.value = e.at("value").get<std::size_t>();
        d.group_index = e.at("group").get<std::size_t>();
        d.images = e.at("images").get<std::vector<Elem>>();
        entries_[k] = std::move(d);
      }
    } catch (const std::exception&) {
      entries_.clear();
    }
  }

  std::filesystem::path file_;
  mutable std::mutex mu_;
  std::map<std::string, CachedDetection> entries_;
  mutable std::size_t hits_ = 0;
  mutable bool dirty_ = false;
};

inline CachedDetection cached_detect(const GroupFamily& f, const Element& e, const PropertyP& P,
                                     const Catalog& catalog, DetectionCache* cache, unsigned jobs = 1) {
  const std::string k = DetectionCache::key(f, e, P, catalog.bound());
  if (cache)
    if (auto hit = cache->get(k)) return *hit;
  const DetectionResult r = detect(f, e, P, catalog, jobs);
  CachedDetection d{r.value, r.witness ? r.witness->group_index : 0,
                    r.witness ? r.witness->images : std::vector<Elem>{}};
  if (cache) cache->put(k, d);
  return d;
}

// ---------------------------------------------------------------------------
// Growth tables.

struct GrowthRecord {
  std::string family;
  std::string prop;
  long long n = 0;
  std::size_t F = 1;          // with lower_bound: F(n) >= this value
  bool lower_bound = false;
  std::string witness;        // element attaining F, or the first unresolved one
  long long witness_length = 0;
  std::size_t quotient_order = 0;  // 0 when the witness is unresolved
  long long elapsed_us = 0;

  std::string display() const { return (lower_bound ? ">= " : "") + std::to_string(F); }
  friend bool operator==(const GrowthRecord&, const GrowthRecord&) = default;
};

struct GrowthTable {
  nlohmann::json config = nlohmann::json::object();
  std::vector<GrowthRecord> rows;

  friend bool operator==(const GrowthTable& a, const GrowthTable& b) {
    return a.config == b.config && a.rows == b.rows;
  }
};

/// Rows n = 1..n_max. The ball of radius n_max is enumerated once and each
/// nontrivial element is detected (concurrently, results in ball order);
/// F(n) is the maximum over elements of length <= n. Any unresolved element
/// of length <= n turns the row into a lower bound of catalog bound + 1.
inline GrowthTable growth_table(const GroupFamily& f, const PropertyP& P, long long n_max, const Catalog& catalog,
                                DetectionCache* cache = nullptr, unsigned jobs = 1,
                                std::size_t ball_budget = kDefaultBallBudget) {
  if (n_max < 0) throw InputError("n_max must be >= 0");
  GrowthTable table;
  table.config = {{"family", f.name()},
                  {"prop", P.name()},
                  {"catalog_bound", catalog.bound()},
                  {"generators", f.alphabet().names()}};
  if (n_max == 0) return table;

  const auto t0 = std::chrono::steady_clock::now();
  const auto ball = ball_enumerate(f, n_max, ball_budget);
  std::vector<CachedDetection> found(ball.size());
  parallel_for(ball.size(), jobs,
               [&](std::size_t i) { found[i] = cached_detect(f, ball[i].element, P, catalog, cache); });

  std::size_t best = 1;
  std::optional<std::size_t> best_at, unresolved_at;
  std::size_t i = 0;
  for (long long n = 1; n <= n_max; ++n) {
    for (; i < ball.size() && ball[i].length <= n; ++i) {
      if (!found[i].value) {
        if (!unresolved_at) unresolved_at = i;
      } else if (*found[i].value > best) {
        best = *found[i].value;
        best_at = i;
      }
    }
    GrowthRecord r;
    r.family = f.name();
    r.prop = P.name();
    r.n = n;
    if (unresolved_at) {
      r.F = static_cast<std::size_t>(catalog.bound()) + 1;
      r.lower_bound = true;
      r.witness = format_element(f, ball[*unresolved_at].element);
      r.witness_length = ball[*unresolved_at].length;
    } else {
      r.F = best;
      if (best_at) {
        r.witness = format_element(f, ball[*best_at].element);
        r.witness_length = ball[*best_at].length;
        r.quotient_order = best;
      }
    }
    r.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
    table.rows.push_back(std::move(r));
  }
  return table;
}

inline GrowthRecord growth_F(const GroupFamily& f, const PropertyP& P, long long n, const Catalog& catalog,
                             DetectionCache* cache = nullptr, unsigned jobs = 1) {
  if (n < 1) throw InputError("growth_F needs n >= 1");
  return growth_table(f, P, n, catalog, cache, jobs).rows.back();
}

// ---------------------------------------------------------------------------
// Ball-size inequality: log w(n) <= s(F(2n)) log F(2n) for the free group of rank 2.

struct Inequality3Report {
  long long n = 0;
  std::size_t w = 0;
  std::optional<std::size_t> F2n;
  std::size_t s = 0;
  double lhs = 0, rhs = 0;
  CheckStatus status = CheckStatus::Inconclusive;
};

inline Inequality3Report inequality3_check(long long n, const Catalog& catalog, DetectionCache* cache = nullptr,
                                           unsigned jobs = 1) {
  if (n < 0) throw InputError("n must be >= 0");
  const GroupFamily f = GroupFamily::free(2);
  Inequality3Report rep;
  rep.n = n;
  rep.w = word_growth(f, n);
  rep.lhs = std::log(static_cast<double>(rep.w));
  if (n == 0) {
    rep.F2n = 1;  // empty maximum over the trivial ball
  } else {
    const auto r = growth_F(f, PropertyP::any(), 2 * n, catalog, cache, jobs);
    if (r.lower_bound) return rep;
    rep.F2n = r.F;
  }
  if (*rep.F2n > static_cast<std::size_t>(catalog.bound())) return rep;
  rep.s = normal_subgroup_count(static_cast<int>(*rep.F2n), catalog);
  rep.rhs = static_cast<double>(rep.s) * std::log(static_cast<double>(*rep.F2n));
  rep.status = rep.lhs <= rep.rhs ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw InputError("unterminated quote in CSV row");
  return out;
}

inline nlohmann::json record_to_json(const GrowthRecord& r) {
  return {{"family", r.family},         {"prop", r.prop},
          {"n", r.n},                   {"F", r.F},
          {"lower_bound", r.lower_bound}, {"witness", r.witness},
          {"witness_length", r.witness_length}, {"quotient_order", r.quotient_order},
          {"elapsed_us", r.elapsed_us}};
}

inline GrowthRecord record_from_json(const nlohmann::json& j) {
  GrowthRecord r;
  r.family = j.at("family").get<std::string>();
  r.prop = j.at("prop").get<std::string>();
  r.n = j.at("n").get<long long>();
  r.F = j.at("F").get<std::size_t>();
  r.lower_bound = j.at("lower_bound").get<bool>();
  r.witness = j.at("witness").get<std::string>();
  r.witness_length = j.at("witness_length").get<long long>();
  r.quotient_order = j.at("quotient_order").get<std::size_t>();
  r.elapsed_us = j.at("elapsed_us").get<long long>();
  return r;
}

}  // namespace detail

inline constexpr const char* kGrowthCsvHeader =
    "family,prop,n,F,lower_bound,witness,witness_length,quotient_order,elapsed_us";

enum class TableFormat { Csv, Json };

inline TableFormat parse_table_format(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  throw InputError("unknown format '" + s + "' (expected csv or json)");
}

/// CSV: a "# config <json>" line, the fixed header, one row per record.
inline std::string table_export(const GrowthTable& t, TableFormat fmt, bool with_timing = true) {
  if (fmt == TableFormat::Json) {
    nlohmann::json j{{"config", t.config}, {"rows", nlohmann::json::array()}};
    for (auto r : t.rows) {
      if (!with_timing) r.elapsed_us = 0;
      j["rows"].push_back(detail::record_to_json(r));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# config " << t.config.dump() << "\n" << kGrowthCsvHeader << "\n";
  for (const auto& r : t.rows)
    out << detail::csv_field(r.family) << ',' << detail::csv_field(r.prop) << ',' << r.n << ',' << r.F << ','
        << (r.lower_bound ? 1 : 0) << ',' << detail::csv_field(r.witness) << ',' << r.witness_length << ','
        << r.quotient_order << ',' << (with_timing ? r.elapsed_us : 0) << "\n";
  return out.str();
}

inline GrowthTable table_import(const std::string& text, TableFormat fmt) {
  GrowthTable t;
  if (fmt == TableFormat::Json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed JSON table: ") + e.what());
    }
    t.config = j.at("config");
    for (const auto& r : j.at("rows")) t.rows.push_back(detail::record_from_json(r));
    return t;
  }
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# config ", 0) == 0) {
      t.config = nlohmann::json::parse(line.substr(9));
      continue;
    }
    if (line.empty()) continue;
    if (!header) {
      if (line != kGrowthCsvHeader) throw InputError("unexpected CSV header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = detail::csv_split(line);
    if (f.size() != 9) throw InputError("CSV row has " + std::to_string(f.size()) + " fields, expected 9");
    GrowthRecord r;
    try {
      r.family = f[0];
      r.prop = f[1];
      r.n = std::stoll(f[2]);
      r.F = std::stoull(f[3]);
      r.lower_bound = f[4] == "1";
      r.witness = f[5];
      r.witness_length = std::stoll(f[6]);
      r.quotient_order = std::stoull(f[7]);
      r.elapsed_us = std::stoll(f[8]);
    } catch (const std::logic_error&) {
      throw InputError("non-numeric field in CSV row '" + line + "'");
    }
    t.rows.push_back(std::move(r));
  }
  if (!header) throw InputError("CSV table has no header");
  return t;
}

// ---------------------------------------------------------------------------
// Diagnostic fit of log F against log log n.

struct LogLogFit {
  double slope = 0, intercept = 0;
  std::vector<double> residuals;
  std::size_t used = 0, excluded = 0;
  std::string label = "diagnostic";
};

/// Least squares over resolved rows with n >= 2 (log log n is undefined at
/// n = 1); needs at least 3 such rows.
inline LogLogFit loglog_fit(const GrowthTable& t) {
  std::vector<double> xs, ys;
  LogLogFit fit;
  for (const auto& r : t.rows) {
    if (r.lower_bound || r.n < 2) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(std::log(static_cast<double>(r.n))));
    ys.push_back(std::log(static_cast<double>(r.F)));
  }
  if (xs.size() < 3) throw InputError("log-log fit needs at least 3 resolved rows with n >= 2");
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = k * sxx - sx * sx;
  fit.slope = den == 0 ? 0 : (k * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / k;
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
  fit.used = xs.size();
  return fit;
}

}  // namespace rfg
