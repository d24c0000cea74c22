#pragma once

// Catalog of all groups of order <= B, one table per isomorphism class.
//
// Every group of order < 60 is solvable, and a nontrivial solvable group has
// a normal subgroup N of prime index p. Such a G is generated by N and one
// element g with g^p = z in N, so it is determined by (N, sigma, z) where
// sigma = conjugation by g is an automorphism of N fixing z with
// sigma^p = conjugation by z. The builder runs over all such triples with N
// already in the catalog, keeps one representative per isomorphism class,
// and stores each class as the closure of its generators' right-regular
// permutations inside the symmetric group of degree |G| (Cayley embedding).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfg/errors.hpp"
#include "rfg/finite_group.hpp"

namespace rfg {

inline constexpr int kCatalogMaxBound = 31;
inline constexpr int kCatalogFormatVersion = 1;

struct CatalogEntry {
  FiniteGroupTable table;
  std::optional<int> nil_class;
  std::optional<int> derived_len;
  int prime = 0;  // p when the order is a power of p (> 1), else 0
  std::size_t aut_order = 0;

  std::size_t order() const { return table.order(); }
  bool abelian() const { return table.is_abelian(); }
};

struct CatalogStats {
  std::size_t candidates = 0;      // extension tables produced
  std::size_t iso_tests = 0;       // exhaustive isomorphism searches
  std::size_t key_collisions = 0;  // fingerprint matches that proved non-isomorphic
  double build_seconds = 0;
};

class Catalog {
 public:
  Catalog() = default;
  Catalog(int bound, std::vector<CatalogEntry> groups, CatalogStats stats = {})
      : bound_(bound), groups_(std::move(groups)), stats_(stats) {}

  int bound() const { return bound_; }
  const std::vector<CatalogEntry>& groups() const { return groups_; }
  const CatalogEntry& at(std::size_t i) const { return groups_.at(i); }
  std::size_t size() const { return groups_.size(); }
  const CatalogStats& stats() const { return stats_; }

  /// Number of isomorphism classes of each order 1..bound.
  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(bound_) + 1, 0);
    for (const auto& g : groups_) ++counts[g.order()];
    return counts;
  }

  /// Index of the catalog group isomorphic to `g`, or nullopt.
  std::optional<std::size_t> identify(const FiniteGroupTable& g) const {
    for (std::size_t i = 0; i < groups_.size(); ++i)
      if (groups_[i].table.iso_key() == g.iso_key() && isomorphic(groups_[i].table, g)) return i;
    return std::nullopt;
  }

  std::string label(std::size_t i) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < i; ++j) k += groups_[j].order() == groups_[i].order();
    return std::to_string(groups_[i].order()) + "#" + std::to_string(k + 1);
  }

 private:
  int bound_ = 0;
  std::vector<CatalogEntry> groups_;
  CatalogStats stats_;
};

namespace detail {

inline bool is_prime_small(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline int prime_power_base(std::size_t n) {
  if (n < 2) return 0;
  std::size_t p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  return n == 1 ? static_cast<int>(p) : 0;
}

inline CatalogEntry make_entry(FiniteGroupTable t) {
  CatalogEntry e{std::move(t), std::nullopt, std::nullopt, 0, 0};
  e.nil_class = nilpotency_class(e.table);
  e.derived_len = derived_length(e.table);
  e.prime = prime_power_base(e.table.order());
  e.aut_order = automorphisms(e.table).size();
  return e;
}

/// Table of the cyclic extension <N, g | g^p = z, g x g^-1 = sigma(x)>.
/// Element (a, i) stands for a g^i and is stored at index i*|N| + a.
inline FiniteGroupTable cyclic_extension(const FiniteGroupTable& N, const std::vector<Elem>& sigma, Elem z, int p) {
  const std::size_t n = N.order();
  const std::size_t order = n * static_cast<std::size_t>(p);
  // sigma_pow[i][b] = sigma^i(b)
  std::vector<std::vector<Elem>> sigma_pow(static_cast<std::size_t>(p), N.all_elements());
  for (int i = 1; i < p; ++i)
    for (Elem b = 0; b < n; ++b) sigma_pow[i][b] = sigma[sigma_pow[i - 1][b]];
  std::vector<Elem> table(order * order);
  for (std::size_t i = 0; i < static_cast<std::size_t>(p); ++i)
    for (Elem a = 0; a < n; ++a)
      for (std::size_t j = 0; j < static_cast<std::size_t>(p); ++j)
        for (Elem b = 0; b < n; ++b) {
          Elem c = N.mul(a, sigma_pow[i][b]);
          std::size_t k = i + j;
          if (k >= static_cast<std::size_t>(p)) {
            c = N.mul(c, z);
            k -= static_cast<std::size_t>(p);
          }
          table[(i * n + a) * order + (j * n + b)] = static_cast<Elem>(k * n + c);
        }
  std::vector<Elem> gens;
  for (Elem x : N.gens()) gens.push_back(x);
  gens.push_back(static_cast<Elem>(n + N.identity()));
  return FiniteGroupTable::from_table(order, std::move(table), std::move(gens), /*verify=*/false);
}

}  // namespace detail

/// Builds the catalog of every group of order <= B up to isomorphism.
inline Catalog catalog_build(int B) {
  if (B < 1) throw InputError("catalog bound must be >= 1");
  if (B > kCatalogMaxBound) throw ResourceError("catalog bound " + std::to_string(B) + " exceeds maximum " +
                                                std::to_string(kCatalogMaxBound));
  const auto t0 = std::chrono::steady_clock::now();
  CatalogStats stats;
  std::vector<std::vector<FiniteGroupTable>> by_order(static_cast<std::size_t>(B) + 1);
  by_order[1].push_back(FiniteGroupTable::trivial());

  for (int n = 2; n <= B; ++n) {
    std::map<std::string, std::vector<std::size_t>> by_key;
    auto& reps = by_order[static_cast<std::size_t>(n)];
    for (int p = 2; p <= n; ++p) {
      if (n % p != 0 || !detail::is_prime_small(p)) continue;
      for (const auto& N : by_order[static_cast<std::size_t>(n / p)]) {
        const auto auts = automorphisms(N);
        for (const auto& sigma : auts) {
          std::vector<Elem> sigma_p = N.all_elements();
          for (int i = 0; i < p; ++i)
            for (auto& x : sigma_p) x = sigma[x];
          for (Elem z = 0; z < N.order(); ++z) {
            if (sigma[z] != z) continue;
            bool inner = true;
            for (Elem x = 0; x < N.order() && inner; ++x) inner = sigma_p[x] == N.mul(N.mul(z, x), N.inv(z));
            if (!inner) continue;
            ++stats.candidates;
            FiniteGroupTable G = detail::cyclic_extension(N, sigma, z, p);
            auto& bucket = by_key[G.iso_key()];
            bool dup = false;
            for (std::size_t idx : bucket) {
              ++stats.iso_tests;
              if (isomorphic(reps[idx], G)) {
                dup = true;
                break;
              }
            }
            if (dup) continue;
            if (!bucket.empty()) ++stats.key_collisions;
            // Cayley embedding: re-close the generators as permutations of degree n.
            const auto gens = G.small_generating_set();
            const auto perms = regular_permutations(G, gens);
            FiniteGroupTable stored = permutation_closure(perms, static_cast<std::size_t>(n));
            if (stored.order() != static_cast<std::size_t>(n))
              throw InternalError("Cayley embedding changed the group order");
            bucket.push_back(reps.size());
            reps.push_back(std::move(stored));
          }
        }
      }
    }
  }

  std::vector<CatalogEntry> groups;
  for (int n = 1; n <= B; ++n) {
    auto& reps = by_order[static_cast<std::size_t>(n)];
    std::stable_sort(reps.begin(), reps.end(),
                     [](const FiniteGroupTable& a, const FiniteGroupTable& b) { return a.iso_key() < b.iso_key(); });
    for (auto& r : reps) groups.push_back(detail::make_entry(std::move(r)));
  }
  stats.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return Catalog(B, std::move(groups), stats);
}

// ---------------------------------------------------------------------------
// Persistence: versioned JSON with explicit row-major tables.

inline nlohmann::json catalog_to_json(const Catalog& c) {
  nlohmann::json j;
  j["format"] = "rfgrowth-catalog";
  j["version"] = kCatalogFormatVersion;
  j["bound"] = c.bound();
  j["groups"] = nlohmann::json::array();
  for (const auto& g : c.groups()) {
    nlohmann::json e;
    e["order"] = g.order();
    e["gens"] = g.table.gens();
    e["mul"] = g.table.table();
    e["iso_key"] = g.table.iso_key();
    j["groups"].push_back(std::move(e));
  }
  return j;
}

/// Parses a cached catalog; nullopt when the format, version or bound does
/// not match (the caller rebuilds). Tables are re-verified on load.
inline std::optional<Catalog> catalog_from_json(const nlohmann::json& j, int expected_bound) {
  if (!j.is_object() || j.value("format", "") != "rfgrowth-catalog") return std::nullopt;
  if (j.value("version", -1) != kCatalogFormatVersion || j.value("bound", -1) != expected_bound) return std::nullopt;
  std::vector<CatalogEntry> groups;
  for (const auto& e : j.at("groups")) {
    auto t = FiniteGroupTable::from_table(e.at("order").get<std::size_t>(), e.at("mul").get<std::vector<Elem>>(),
                                          e.at("gens").get<std::vector<Elem>>());
    if (t.iso_key() != e.at("iso_key").get<std::string>()) return std::nullopt;
    groups.push_back(detail::make_entry(std::move(t)));
  }
  return Catalog(expected_bound, std::move(groups));
}

/// Loads `<dir>/catalog-B<bound>.json` when present and current, otherwise
/// builds and writes it.
inline Catalog load_or_build_catalog(int bound, const std::filesystem::path& dir) {
  const auto path = dir / ("catalog-B" + std::to_string(bound) + ".json");
  if (std::filesystem::exists(path)) {
    try {
      std::ifstream in(path);
      auto j = nlohmann::json::parse(in);
      if (auto c = catalog_from_json(j, bound)) return std::move(*c);
    } catch (const std::exception&) {
      // stale or corrupt cache: rebuild below
    }
  }
  Catalog c = catalog_build(bound);
  std::filesystem::create_directories(dir);
  std::ofstream out(path);
  out << catalog_to_json(c).dump();
  return c;
}

}  // namespace rfg
