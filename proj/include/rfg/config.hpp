#pragma once

// Run configuration: defaults, an optional JSON config file and command-line
// overrides, in increasing precedence. Every output embeds a snapshot.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rfg/catalog.hpp"
#include "rfg/errors.hpp"
#include "rfg/family.hpp"
#include "rfg/gauss.hpp"
#include "rfg/magnus.hpp"

namespace rfg {

inline constexpr const char* kCacheDirEnv = "RFGROWTH_CACHE_DIR";

struct RunConfig {
  int bound = 16;
  int magnus_cap = 8;
  std::size_t monomial_budget = kDefaultMonomialBudget;
  std::size_t ball_budget = kDefaultBallBudget;
  int u_budget = kDefaultUIndexBudget;
  unsigned gauss_level_budget = kDefaultGaussLevelBudget;
  std::string format = "csv";
  std::string cache_dir = ".rfgrowth-cache";
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  static RunConfig defaults() {
    RunConfig c;
    if (const char* env = std::getenv(kCacheDirEnv); env && *env) c.cache_dir = env;
    return c;
  }

  void validate() const {
    if (bound < 1 || bound > kCatalogMaxBound)
      throw InputError("catalog bound must be in 1.." + std::to_string(kCatalogMaxBound));
    if (magnus_cap < 1) throw InputError("magnus cap must be positive");
    if (monomial_budget == 0 || ball_budget == 0) throw InputError("budgets must be positive");
    if (u_budget < 1) throw InputError("u-index budget must be positive");
    if (gauss_level_budget < 1) throw InputError("gauss level budget must be positive");
    if (format != "csv" && format != "json") throw InputError("format must be csv or json");
    if (jobs < 1) throw InputError("jobs must be positive");
  }

  /// Reproducible part of the configuration (jobs and cache location do not
  /// affect results and are left out).
  nlohmann::json snapshot() const {
    return {{"bound", bound},
            {"magnus_cap", magnus_cap},
            {"monomial_budget", monomial_budget},
            {"ball_budget", ball_budget},
            {"u_budget", u_budget},
            {"gauss_level_budget", gauss_level_budget},
            {"seed", seed}};
  }

  nlohmann::json to_json() const {
    auto j = snapshot();
    j["format"] = format;
    j["cache_dir"] = cache_dir;
    j["jobs"] = jobs;
    return j;
  }

  /// Overrides the fields present in `j`; unknown keys are rejected.
  void merge(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
      try {
        if (k == "bound") bound = v.get<int>();
        else if (k == "magnus_cap") magnus_cap = v.get<int>();
        else if (k == "monomial_budget") monomial_budget = v.get<std::size_t>();
        else if (k == "ball_budget") ball_budget = v.get<std::size_t>();
        else if (k == "u_budget") u_budget = v.get<int>();
        else if (k == "gauss_level_budget") gauss_level_budget = v.get<unsigned>();
        else if (k == "format") format = v.get<std::string>();
        else if (k == "cache_dir") cache_dir = v.get<std::string>();
        else if (k == "seed") seed = v.get<std::uint64_t>();
        else if (k == "jobs") jobs = v.get<unsigned>();
        else throw InputError("unknown config key '" + k + "'");
      } catch (const nlohmann::json::exception&) {
        throw InputError("config key '" + k + "' has the wrong type");
      }
    }
  }

  void merge_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file " + path.string());
    try {
      merge(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("config file " + path.string() + ": " + e.what());
    }
  }
};

}  // namespace rfg
