// rfgrowth: command-line front end for the rfg library.
//
// Exit codes: 0 pass / resolved, 1 failure, 2 usage or input error,
// 3 inconclusive or resource exhaustion.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rfg/catalog.hpp"
#include "rfg/config.hpp"
#include "rfg/detect.hpp"
#include "rfg/gauss.hpp"
#include "rfg/growth.hpp"
#include "rfg/magnus.hpp"
#include "rfg/reproduce.hpp"
#include "rfg/wreath.hpp"
#include "rfg/wreath_floor.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct Flags {
  std::optional<std::string> config_file;
  std::optional<int> bound;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> cache_dir;
  std::optional<int> magnus_cap;
};

rfg::RunConfig resolve_config(const Flags& f) {
  rfg::RunConfig cfg;
  if (f.config_file) cfg.merge_file(*f.config_file);
  if (const char* env = std::getenv(rfg::kCacheDirEnv); env && *env) cfg.cache_dir = env;
  if (f.bound) cfg.bound = *f.bound;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.seed) cfg.seed = *f.seed;
  if (f.format) cfg.format = *f.format;
  if (f.cache_dir) cfg.cache_dir = *f.cache_dir;
  if (f.magnus_cap) cfg.magnus_cap = *f.magnus_cap;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON config file");
  app->add_option("--bound", f.bound, "catalog bound B (largest quotient order searched)");
  app->add_option("--jobs", f.jobs, "worker threads");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--cache-dir", f.cache_dir, "directory for catalog and detection caches");
}

std::filesystem::path detect_cache_path(const rfg::RunConfig& cfg) {
  return std::filesystem::path(cfg.cache_dir) / "detect-cache-v1.json";
}

std::string config_line(const rfg::RunConfig& cfg) { return "# config " + cfg.snapshot().dump(); }

int cmd_detect(const rfg::RunConfig& cfg, const std::string& family, const std::string& text, const std::string& prop) {
  const auto f = rfg::GroupFamily::parse(family);
  const auto P = rfg::PropertyP::parse(prop);
  const auto e = rfg::parse_element(f, text);
  const auto catalog = rfg::load_or_build_catalog(cfg.bound, cfg.cache_dir);
  rfg::DetectionCache cache(detect_cache_path(cfg));
  const auto d = rfg::cached_detect(f, e, P, catalog, &cache, cfg.jobs);
  cache.save();

  std::string witness_group, witness_images;
  if (d.value) {
    witness_group = catalog.label(d.group_index);
    for (auto x : d.images) witness_images += (witness_images.empty() ? "" : " ") + std::to_string(x);
  }
  const std::string value = d.value ? std::to_string(*d.value) : "> " + std::to_string(cfg.bound);
  if (cfg.format == "json") {
    nlohmann::json j{{"config", cfg.snapshot()},
                     {"family", f.name()},
                     {"element", rfg::format_element(f, e)},
                     {"prop", P.name()},
                     {"resolved", d.value.has_value()},
                     {"value", d.value ? nlohmann::json(*d.value) : nlohmann::json(nullptr)},
                     {"display", value},
                     {"bound", cfg.bound}};
    if (d.value) j["witness"] = {{"group", witness_group}, {"images", d.images}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << config_line(cfg) << "\n"
              << "family,element,prop,D,bound,witness_group,witness_images\n"
              << f.name() << ',' << rfg::detail::csv_field(rfg::format_element(f, e)) << ',' << P.name() << ','
              << value << ',' << cfg.bound << ',' << witness_group << ',' << witness_images << "\n";
  }
  return d.value ? kPass : kInconclusive;
}

int cmd_growth(const rfg::RunConfig& cfg, const std::string& family, const std::string& prop, long long nmax,
               const std::string& out, bool timing) {
  const auto f = rfg::GroupFamily::parse(family);
  const auto P = rfg::PropertyP::parse(prop);
  const auto catalog = rfg::load_or_build_catalog(cfg.bound, cfg.cache_dir);
  rfg::DetectionCache cache(detect_cache_path(cfg));
  auto table = rfg::growth_table(f, P, nmax, catalog, &cache, cfg.jobs, cfg.ball_budget);
  cache.save();
  table.config["run"] = cfg.snapshot();
  const auto text = rfg::table_export(table, rfg::parse_table_format(cfg.format), timing);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(out);
    if (!o) throw rfg::InputError("cannot write " + out);
    o << text;
  }
  return kPass;
}

int cmd_reproduce(const rfg::RunConfig& cfg, const std::string& claim, std::optional<int> n,
                  std::optional<long long> p) {
  const auto& ids = rfg::claim_ids();
  if (std::find(ids.begin(), ids.end(), claim) == ids.end())
    throw CLI::ValidationError("claim", "unknown claim id '" + claim + "'");
  auto catalog = [&] { return rfg::load_or_build_catalog(cfg.bound, cfg.cache_dir); };
  rfg::ClaimReport rep;
  if (claim == "claim1") rep = rfg::reproduce_claim1(cfg, catalog());
  else if (claim == "claim2") rep = rfg::reproduce_claim2(cfg);
  else if (claim == "claim3") rep = rfg::reproduce_claim3(cfg);
  else if (claim == "example1") rep = rfg::reproduce_example1(cfg, catalog(), n.value_or(3), p.value_or(2));
  else if (claim == "example2") rep = rfg::reproduce_example2(cfg, catalog(), n.value_or(2));
  else {
    rfg::DetectionCache cache(detect_cache_path(cfg));
    rep = rfg::reproduce_ineq3(cfg, catalog(), &cache);
    cache.save();
  }

  if (cfg.format == "json") {
    std::cout << rep.to_json().dump(2) << "\n";
  } else {
    std::cout << "# config " << rep.config.dump() << "\nclaim,check,status,detail\n";
    for (const auto& c : rep.checks)
      std::cout << rep.claim << ',' << rfg::detail::csv_field(c.name) << ',' << rfg::to_string(c.status) << ','
                << rfg::detail::csv_field(c.detail) << "\n";
    std::cout << rep.claim << ",overall," << rfg::to_string(rep.overall()) << ",\n";
  }
  switch (rep.overall()) {
    case rfg::CheckStatus::Pass: return kPass;
    case rfg::CheckStatus::Fail: return kFail;
    case rfg::CheckStatus::Inconclusive: return kInconclusive;
  }
  return kFail;
}

int cmd_catalog(const rfg::RunConfig& cfg) {
  const auto catalog = rfg::load_or_build_catalog(cfg.bound, cfg.cache_dir);
  const auto counts = catalog.class_counts();
  if (cfg.format == "json") {
    nlohmann::json j{{"config", cfg.snapshot()}, {"bound", cfg.bound}, {"classes", nlohmann::json::array()}};
    for (std::size_t n = 1; n < counts.size(); ++n) j["classes"].push_back({{"order", n}, {"count", counts[n]}});
    j["total"] = catalog.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << config_line(cfg) << "\norder,classes\n";
    for (std::size_t n = 1; n < counts.size(); ++n) std::cout << n << ',' << counts[n] << "\n";
  }
  return kPass;
}

int cmd_magnus(const rfg::RunConfig& cfg, const std::string& word, std::optional<int> u_index, bool show_series) {
  const rfg::Word w = u_index ? rfg::build_u(*u_index, cfg.u_budget) : rfg::parse_word(word, rfg::GeneratorAlphabet::xy());
  if (w.empty()) throw rfg::InputError("the trivial word has no depth");
  const auto rep = rfg::lcs_depth(w, cfg.magnus_cap);
  rfg::TruncatedSeries lead(cfg.magnus_cap, 2);
  for (const auto& [m, c] : rep.leading) lead.add(m, c);
  const auto text = rfg::format_word(w, rfg::GeneratorAlphabet::xy());
  if (cfg.format == "json") {
    nlohmann::json j{{"config", cfg.snapshot()},
                     {"word", text},
                     {"length", w.length()},
                     {"cap", cfg.magnus_cap},
                     {"depth", rep.depth ? nlohmann::json(*rep.depth) : nlohmann::json(nullptr)},
                     {"display", rep.depth_display()},
                     {"leading", lead.to_string()}};
    if (show_series) j["series"] = rfg::expand(w, cfg.magnus_cap, 2, cfg.monomial_budget).to_string();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << config_line(cfg) << "\nword,length,cap,depth,leading\n"
              << rfg::detail::csv_field(text) << ',' << w.length() << ',' << cfg.magnus_cap << ','
              << rep.depth_display() << ',' << rfg::detail::csv_field(lead.to_string()) << "\n";
    if (show_series) std::cout << "# series " << rfg::expand(w, cfg.magnus_cap, 2, cfg.monomial_budget).to_string() << "\n";
  }
  return rep.depth ? kPass : kInconclusive;
}

int cmd_gauss(const rfg::RunConfig& cfg, const std::string& matrix) {
  const auto A = rfg::parse_gauss_mat(matrix);
  nlohmann::json j{{"config", cfg.snapshot()}, {"matrix", rfg::format_gauss_mat(A)}, {"det", A.det().to_string()}};
  if (A.is_special()) {
    auto lvl = rfg::g_level(A);
    j["level"] = lvl ? nlohmann::json(*lvl) : nlohmann::json(">= " + std::to_string(rfg::kDefaultLevelCap + 1));
    if (rfg::congruent_one_mod_half(A)) {
      j["h"] = rfg::h_map(A).to_string();
      const rfg::GaussMat2 one = rfg::GaussMat2::identity();
      if (!(A == one) && !(A == -one) && lvl) {
        auto nb = rfg::nil_detect_upper(A);
        j["nil_order_bound_log2"] = nb.order_log2;
        j["norm_mechanism"] = nb.norm_mechanism;
      }
    }
    auto lambda = rfg::circle_preserved(A, rfg::invariant_circle());
    j["preserves_circle"] = lambda ? nlohmann::json(*lambda) : nlohmann::json(false);
  }
  if (cfg.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << config_line(cfg) << "\nkey,value\n";
    for (const auto& [k, v] : j.items())
      if (k != "config") std::cout << k << ',' << rfg::detail::csv_field(v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  return kPass;
}

int cmd_wreath(const rfg::RunConfig& cfg, int n, long long p, bool show_matrix) {
  const auto A = rfg::build_ap_matrix(n);
  const auto v = p ? rfg::kernel_mod_p(A, p) : rfg::small_integer_kernel(A);
  std::string w;
  for (long long x : v.w) w += (w.empty() ? "" : " ") + std::to_string(x);
  nlohmann::json j{{"config", cfg.snapshot()},
                   {"n", n},
                   {"p", p},
                   {"m", v.m},
                   {"w", v.w},
                   {"v", rfg::format_wreath(v.v)},
                   {"length", rfg::wreath_word_length(v.v)},
                   {"sup_norm", v.sup_norm()}};
  if (show_matrix) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < A.rows(); ++i) {
      std::string r;
      for (auto x : A.row(i)) r += static_cast<char>('0' + x);
      rows.push_back(r);
    }
    j["matrix"] = rows;
  }
  if (cfg.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << config_line(cfg) << "\nn,p,m,w,v,length,sup_norm\n"
              << n << ',' << p << ',' << v.m << ',' << w << ',' << rfg::format_wreath(v.v) << ','
              << rfg::wreath_word_length(v.v) << ',' << v.sup_norm() << "\n";
    if (show_matrix)
      for (const auto& r : j["matrix"]) std::cout << "# " << r.get<std::string>() << "\n";
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual finiteness growth: detecting quotients, growth tables and exact checks"};
  app.require_subcommand(1);
  Flags flags;

  std::string family = "free2", word, prop = "any", out, claim, matrix;
  long long nmax = 10;
  std::optional<int> n, u_index;
  std::optional<long long> p;
  bool timing = false, show_series = false, show_matrix = false;

  auto* detect = app.add_subcommand("detect", "minimal detecting quotient of an element");
  detect->add_option("--family", family, "free<r>, surface2, lamp<p>, lampz, z")->capture_default_str();
  detect->add_option("--word", word, "word, integer (z) or 'shift; pos:coeff ...' (lamplighters)")->required();
  detect->add_option("--prop", prop, "any, sol, nil, p<prime>")->capture_default_str();
  add_common(detect, flags);

  auto* growth = app.add_subcommand("growth", "residual finiteness growth table F(1..nmax)");
  growth->add_option("--family", family)->capture_default_str();
  growth->add_option("--prop", prop)->capture_default_str();
  growth->add_option("--nmax", nmax)->capture_default_str()->check(CLI::NonNegativeNumber);
  growth->add_option("--out", out, "write the table to a file");
  growth->add_flag("--timing", timing, "include per-row timing");
  add_common(growth, flags);

  auto* reproduce = app.add_subcommand("reproduce", "run the checks for one claim");
  reproduce->add_option("claim", claim, "claim1, claim2, claim3, example1, example2, ineq3")->required();
  reproduce->add_option("--n", n, "example parameter n");
  reproduce->add_option("--p", p, "example prime p");
  add_common(reproduce, flags);

  auto* catalog = app.add_subcommand("catalog", "build or load the group catalog and print class counts");
  add_common(catalog, flags);

  auto* magnus = app.add_subcommand("magnus", "lower central series depth via the Magnus expansion");
  auto* word_opt = magnus->add_option("--word", word, "word in x, y");
  magnus->add_option("--u", u_index, "use the word u_n")->excludes(word_opt);
  magnus->add_option("--cap", flags.magnus_cap, "degree cap");
  magnus->add_flag("--series", show_series, "print the truncated expansion");
  add_common(magnus, flags);

  auto* gauss = app.add_subcommand("gauss", "congruence data of a 2x2 Gaussian integer matrix");
  gauss->add_option("--matrix", matrix, "[[(re,im),(re,im)],[(re,im),(re,im)]]")->required();
  add_common(gauss, flags);

  auto* wreath = app.add_subcommand("wreath", "AP matrix kernel candidate for the lamplighter examples");
  wreath->add_option("--n", n, "AP parameter n")->required();
  wreath->add_option("--p", p, "lamp prime (0 for the integer lamplighter)");
  wreath->add_flag("--matrix", show_matrix, "print the AP matrix");
  add_common(wreath, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    const auto cfg = resolve_config(flags);
    if (*detect) return cmd_detect(cfg, family, word, prop);
    if (*growth) return cmd_growth(cfg, family, prop, nmax, out, timing);
    if (*reproduce) return cmd_reproduce(cfg, claim, n, p);
    if (*catalog) return cmd_catalog(cfg);
    if (*magnus) {
      if (word.empty() && !u_index) throw rfg::InputError("magnus needs --word or --u");
      return cmd_magnus(cfg, word, u_index, show_series);
    }
    if (*gauss) return cmd_gauss(cfg, matrix);
    if (*wreath) {
      if (p && *p != 0 && !rfg::detail::is_prime(*p)) throw rfg::InputError("--p must be prime or 0");
      return cmd_wreath(cfg, *n, p.value_or(2), show_matrix);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const rfg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const rfg::ResourceError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
