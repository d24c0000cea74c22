#pragma once

// One runner per reproducible item. Each returns named checks with
// pass / fail / inconclusive status; resource exhaustion is inconclusive,
// never a failure.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfg/catalog.hpp"
#include "rfg/config.hpp"
#include "rfg/detect.hpp"
#include "rfg/gauss.hpp"
#include "rfg/growth.hpp"
#include "rfg/magnus.hpp"
#include "rfg/status.hpp"
#include "rfg/wreath.hpp"
#include "rfg/wreath_floor.hpp"

namespace rfg {

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct ClaimReport {
  std::string claim;
  nlohmann::json config;
  std::vector<CheckResult> checks;

  CheckStatus overall() const {
    CheckStatus s = CheckStatus::Pass;
    for (const auto& c : checks) {
      if (c.status == CheckStatus::Fail) return CheckStatus::Fail;
      if (c.status == CheckStatus::Inconclusive) s = CheckStatus::Inconclusive;
    }
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"claim", claim}, {"status", to_string(overall())}, {"config", config}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    return j;
  }
};

inline const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids{"claim1", "claim2", "claim3", "example1", "example2", "ineq3"};
  return ids;
}

namespace detail {

inline CheckStatus pass_if(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

// Runs `body`, turning resource exhaustion into an inconclusive check.
inline void guarded(ClaimReport& rep, const std::string& name, const std::function<CheckResult()>& body) {
  try {
    rep.checks.push_back(body());
  } catch (const ResourceError& e) {
    rep.checks.push_back({name, CheckStatus::Inconclusive, e.what()});
  }
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Nilpotent detecting quotients of `w` in the catalog: (hits, violations of
/// class >= depth).
struct NilDepthCheck {
  std::size_t detecting_maps = 0;
  std::size_t violations = 0;
};

inline NilDepthCheck nilpotent_class_vs_depth(const Word& w, int depth, const Catalog& catalog) {
  NilDepthCheck out;
  for (const auto& g : catalog.groups()) {
    if (!g.nil_class) continue;
    const auto& Q = g.table;
    const Elem n = static_cast<Elem>(Q.order());
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        const std::vector<Elem> im{a, b};
        if (evaluate_word(Q, im, w) == Q.identity()) continue;
        ++out.detecting_maps;
        if (*g.nil_class < depth) ++out.violations;
      }
  }
  return out;
}

/// G^(k) inside the lower central term of standard index 2^k (G_{2^k - 1}
/// counting from G_0 = G), for every k with G^(k) != 1.
inline bool hall_inclusion_holds(const FiniteGroupTable& G) {
  const auto all = G.all_elements();
  std::vector<std::vector<Elem>> lcs{all};
  auto lcs_term = [&](std::size_t j) -> const std::vector<Elem>& {
    while (lcs.size() <= j) lcs.push_back(G.commutator_subgroup(lcs.back(), all));
    return lcs[j];
  };
  std::vector<Elem> der = all;
  for (std::size_t k = 1; der.size() > 1; ++k) {
    auto next = G.commutator_subgroup(der, der);
    if (next.size() == der.size()) break;
    der = std::move(next);
    const auto& target = lcs_term((std::size_t{1} << k) - 1);
    if (!std::includes(target.begin(), target.end(), der.begin(), der.end())) return false;
  }
  return true;
}

inline ClaimReport reproduce_claim1(const RunConfig& cfg, const Catalog& catalog) {
  ClaimReport rep{"claim1", cfg.snapshot(), {}};
  const int n_max = std::min(3, cfg.u_budget);

  detail::guarded(rep, "u_n nontrivial for n <= 3", [&] {
    std::vector<std::string> parts;
    bool all = n_max >= 3;
    for (int n = 1; n <= n_max; ++n) {
      auto d = lcs_depth(build_u(n, cfg.u_budget), cfg.magnus_cap);
      parts.push_back("depth(u" + std::to_string(n) + ") = " + d.depth_display());
      all = all && d.depth.has_value();
    }
    return CheckResult{"u_n nontrivial for n <= 3", all ? CheckStatus::Pass : CheckStatus::Inconclusive,
                       detail::join(parts)};
  });

  detail::guarded(rep, "depth(u_{n+1}) >= 2 depth(u_n) for n = 1, 2", [&] {
    auto d = depth_doubling_check(n_max, cfg.magnus_cap, cfg.u_budget);
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < d.pair_status.size(); ++i)
      parts.push_back("n=" + std::to_string(i + 1) + ": " + d.depths[i].depth_display() + " -> " +
                      d.depths[i + 1].depth_display() + " " + to_string(d.pair_status[i]));
    return CheckResult{"depth(u_{n+1}) >= 2 depth(u_n) for n = 1, 2",
                       n_max < 3 ? CheckStatus::Inconclusive : d.overall, detail::join(parts)};
  });

  detail::guarded(rep, "depth(u_n) >= 2^(n-1)", [&] {
    bool ok = true, resolved = true;
    for (int n = 1; n <= n_max; ++n) {
      auto d = lcs_depth(build_u(n, cfg.u_budget), cfg.magnus_cap);
      if (!d.depth) resolved = resolved && cfg.magnus_cap + 1 >= (1 << (n - 1));
      else ok = ok && *d.depth >= (1 << (n - 1));
    }
    return CheckResult{"depth(u_n) >= 2^(n-1)", !ok ? CheckStatus::Fail : resolved ? CheckStatus::Pass : CheckStatus::Inconclusive, ""};
  });

  detail::guarded(rep, "nilpotent detecting quotients have class >= depth", [&] {
    const Word x = Word::generator(0), y = Word::generator(1), c = commutator(x, y);
    const std::vector<std::pair<std::string, Word>> words{{"u1", build_u(1)},
                                                          {"u2", build_u(2)},
                                                          {"[x,y]", c},
                                                          {"[[x,y],x]", commutator(c, x)},
                                                          {"[[x,y],y]", commutator(c, y)},
                                                          {"[[[x,y],x],y]", commutator(commutator(c, x), y)}};
    bool ok = true;
    std::vector<std::string> parts;
    for (const auto& [name, w] : words) {
      auto d = lcs_depth(w, cfg.magnus_cap);
      if (!d.depth) throw ResourceError("depth of " + name + " exceeds the Magnus cap");
      auto r = nilpotent_class_vs_depth(w, *d.depth, catalog);
      ok = ok && r.violations == 0;
      parts.push_back(name + ": depth " + std::to_string(*d.depth) + ", " + std::to_string(r.detecting_maps) +
                      " detecting maps, " + std::to_string(r.violations) + " violations");
    }
    return CheckResult{"nilpotent detecting quotients have class >= depth", detail::pass_if(ok), detail::join(parts, "; ")};
  });

  detail::guarded(rep, "|Q| > 2^c for catalog groups of class c >= 2", [&] {
    std::size_t checked = 0, bad = 0;
    for (const auto& g : catalog.groups())
      if (g.nil_class && *g.nil_class >= 2) {
        ++checked;
        if (g.order() <= (std::size_t{1} << *g.nil_class)) ++bad;
      }
    return CheckResult{"|Q| > 2^c for catalog groups of class c >= 2", detail::pass_if(bad == 0),
                       std::to_string(checked) + " groups checked"};
  });

  detail::guarded(rep, "derived series inside lower central series (Hall)", [&] {
    std::size_t bad = 0;
    for (const auto& g : catalog.groups()) bad += !hall_inclusion_holds(g.table);
    return CheckResult{"derived series inside lower central series (Hall)", detail::pass_if(bad == 0),
                       std::to_string(catalog.size()) + " groups checked"};
  });
  return rep;
}

// ---------------------------------------------------------------------------

/// Generators of the level-one congruence group used for sampling.
inline std::vector<GaussMat2> level_one_sample_generators() {
  const auto xs = fuchsian_generators();
  std::vector<GaussMat2> g{xs[0], xs[1], GaussMat2({1, 0}, {1, 1}, {0, 0}, {1, 0}),
                           GaussMat2({1, 0}, {0, 0}, {1, 1}, {1, 0})};
  const std::size_t k = g.size();
  for (std::size_t i = 0; i < k; ++i) g.push_back(g[i].sl2_inverse());
  return g;
}

inline GaussMat2 random_product(const std::vector<GaussMat2>& gens, int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  GaussMat2 A = GaussMat2::identity();
  for (int i = 0; i < len; ++i) A = A * gens[pick(rng)];
  return A;
}

struct NormMechanismSweep {
  std::size_t matrices = 0;
  std::size_t failures = 0;
  std::size_t per_level[3] = {0, 0, 0};
};

/// Every A in SL2(Z[i]) with A = 1 mod (1-i), A != +-1, real and imaginary
/// parts in [-box, box] and level <= 2.
inline NormMechanismSweep norm_mechanism_sweep(int box = 2) {
  NormMechanismSweep s;
  std::vector<GaussInt> vals;
  for (int a = -box; a <= box; ++a)
    for (int b = -box; b <= box; ++b) vals.emplace_back(a, b);
  auto half = [](const GaussInt& z) { return static_cast<int>(((z.re() + z.im()) % 2 + 2) % 2); };
  const GaussMat2 one = GaussMat2::identity();
  for (const auto& a : vals) {
    if (half(a) != 1) continue;
    for (const auto& d : vals) {
      if (half(d) != 1) continue;
      const GaussInt ad = a * d;
      for (const auto& b : vals) {
        if (half(b) != 0) continue;
        for (const auto& c : vals) {
          if (half(c) != 0) continue;
          if (!(ad - b * c == GaussInt(1))) continue;
          GaussMat2 A(a, b, c, d);
          if (A == one || A == -one) continue;
          auto lvl = g_level(A);
          if (!lvl || *lvl > 2) continue;
          ++s.matrices;
          ++s.per_level[*lvl];
          auto nb = nil_detect_upper(A);
          if (!nb.norm_mechanism || nb.order_log2 != 8 * nb.level) ++s.failures;
        }
      }
    }
  }
  return s;
}

inline ClaimReport reproduce_claim2(const RunConfig& cfg) {
  ClaimReport rep{"claim2", cfg.snapshot(), {}};
  for (unsigned k = 1; k <= 2; ++k) {
    const std::string name = "kernel at level " + std::to_string(k) + " is a 2-group of order <= 2^" + std::to_string(8 * k);
    detail::guarded(rep, name, [&] {
      auto r = kernel_2group_check(k, cfg.gauss_level_budget);
      return CheckResult{name, detail::pass_if(r.is_two_group && r.within_bound()),
                         "order " + std::to_string(r.order) + ", max element order " +
                             std::to_string(r.max_element_order)};
    });
  }

  std::mt19937_64 rng(cfg.seed);
  {
    const auto gens = level_one_sample_generators();
    std::uniform_int_distribution<int> len(1, 6);
    std::size_t bad = 0;
    for (int t = 0; t < 100; ++t) {
      const GaussMat2 A = random_product(gens, len(rng), rng), B = random_product(gens, len(rng), rng);
      if (!(h_map(A * B) == h_map(A) + h_map(B))) ++bad;
    }
    rep.checks.push_back({"h is additive on 100 random pairs", detail::pass_if(bad == 0),
                          std::to_string(bad) + " mismatches"});
  }
  {
    const auto xs = fuchsian_generators();
    std::vector<GaussMat2> gens(xs.begin(), xs.end());
    bool ok = true;
    std::vector<std::string> parts;
    for (int n = 1; n <= 6; ++n) {
      auto p = entry_growth_probe(gens, n, 167, rng);
      ok = ok && p.holds;
      parts.push_back("n=" + std::to_string(n) + ": " + p.observed.str() + " <= " + p.bound.str());
    }
    rep.checks.push_back({"entry norms of 1002 random products stay below (2 beta)^n", detail::pass_if(ok),
                          detail::join(parts)});
  }
  {
    auto s = norm_mechanism_sweep();
    rep.checks.push_back({"norm mechanism on all level <= 2 matrices with entries in [-2,2]+[-2,2]i",
                          detail::pass_if(s.failures == 0 && s.matrices > 0),
                          std::to_string(s.matrices) + " matrices (level 1: " + std::to_string(s.per_level[1]) +
                              ", level 2: " + std::to_string(s.per_level[2]) + "), " + std::to_string(s.failures) +
                              " failures"});
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline ClaimReport reproduce_claim3(const RunConfig& cfg) {
  ClaimReport rep{"claim3", cfg.snapshot(), {}};
  for (auto& c : fuchsian_reduction_check()) rep.checks.push_back({c.name, detail::pass_if(c.ok), c.detail});
  const auto xs = fuchsian_generators();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto lambda = circle_preserved(xs[i], invariant_circle());
    rep.checks.push_back({"x" + std::to_string(i + 1) + " preserves the circle", detail::pass_if(lambda.has_value()),
                          lambda ? "lambda = " + std::to_string(*lambda) : "not preserved"});
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace detail {

inline void wreath_candidate_checks(ClaimReport& rep, const KernelCandidate& v, long long length_bound,
                                    const Catalog& catalog, unsigned jobs) {
  const APMatrix A = build_ap_matrix(v.n);
  const auto Aw = A.apply(v.w, v.modulus);
  bool zero = true, nonzero_w = false;
  for (long long x : Aw) zero = zero && x == 0;
  for (long long x : v.w) nonzero_w = nonzero_w || x != 0;
  rep.checks.push_back({"w is a nonzero kernel vector of A", pass_if(zero && nonzero_w), "w = " + [&] {
                          std::string s;
                          for (long long x : v.w) s += (s.empty() ? "" : " ") + std::to_string(x);
                          return s;
                        }()});

  const long long len = wreath_word_length(v.v);
  rep.checks.push_back({"word length of v below " + std::to_string(length_bound), pass_if(len < length_bound),
                        "length " + std::to_string(len)});

  bool collapse_ok = true;
  for (long long r = 1; r <= v.n; ++r)
    for (long long c : ap_collapse(v.v, r)) collapse_ok = collapse_ok && c == 0;
  rep.checks.push_back({"period-r collapse of v vanishes for r <= n", pass_if(collapse_ok), ""});

  guarded(rep, "no group of order < n detects v", [&] {
    auto f = detection_floor_verify(v, v.n, catalog, jobs);
    return CheckResult{"no group of order < n detects v", pass_if(f.passed()),
                       std::to_string(f.groups_checked) + " groups, " + std::to_string(f.homs_checked) +
                           " homomorphisms, " + std::to_string(f.counterexamples.size()) + " counterexamples"};
  });

  guarded(rep, "v is detected by a quotient of order >= n", [&] {
    const GroupFamily fam = v.modulus ? GroupFamily::lamplighter(v.modulus) : GroupFamily::lamplighter_z();
    auto d = detect(fam, Element{v.v}, PropertyP::any(), catalog, jobs);
    if (d.value)
      return CheckResult{"v is detected by a quotient of order >= n",
                         pass_if(*d.value >= static_cast<std::size_t>(v.n)),
                         "catalog group " + catalog.label(d.witness->group_index)};
    auto e = explicit_detector(v);
    if (!e) throw ResourceError("no detecting quotient within the catalog or the explicit family");
    const bool ok = e->order_log2 >= std::log2(static_cast<double>(v.n));
    return CheckResult{"v is detected by a quotient of order >= n", pass_if(ok),
                       "D(v) > " + std::to_string(catalog.bound()) + "; explicit quotient " + e->describe() +
                           " of order 2^" + std::to_string(e->order_log2)};
  });
}

}  // namespace detail

inline ClaimReport reproduce_example1(const RunConfig& cfg, const Catalog& catalog, int n, long long p) {
  if (n < 1) throw InputError("example1 needs n >= 1");
  if (!detail::is_prime(p)) throw InputError("example1 needs a prime p");
  ClaimReport rep{"example1", cfg.snapshot(), {}};
  rep.config["n"] = n;
  rep.config["p"] = p;
  const auto v = kernel_mod_p(build_ap_matrix(n), p);
  detail::wreath_candidate_checks(rep, v, 2 * static_cast<long long>(v.m) * (p + 2), catalog, cfg.jobs);
  return rep;
}

inline ClaimReport reproduce_example2(const RunConfig& cfg, const Catalog& catalog, int n) {
  if (n < 1) throw InputError("example2 needs n >= 1");
  ClaimReport rep{"example2", cfg.snapshot(), {}};
  rep.config["n"] = n;
  const auto v = small_integer_kernel(build_ap_matrix(n));
  const long long k = static_cast<long long>(v.m) + 2;
  rep.checks.push_back({"max |w_i| <= m + 2", detail::pass_if(v.sup_norm() <= k),
                        "max |w_i| = " + std::to_string(v.sup_norm()) + ", m + 2 = " + std::to_string(k)});
  detail::wreath_candidate_checks(rep, v, 2 * static_cast<long long>(v.m) * (k + 2), catalog, cfg.jobs);
  return rep;
}

inline ClaimReport reproduce_ineq3(const RunConfig& cfg, const Catalog& catalog, DetectionCache* cache) {
  ClaimReport rep{"ineq3", cfg.snapshot(), {}};
  for (long long n = 0; n <= 2; ++n) {
    const std::string name = "log w(" + std::to_string(n) + ") <= s(F(" + std::to_string(2 * n) + ")) log F(" +
                             std::to_string(2 * n) + ")";
    detail::guarded(rep, name, [&] {
      auto r = inequality3_check(n, catalog, cache, cfg.jobs);
      char buf[160];
      std::snprintf(buf, sizeof buf, "w = %zu, F = %s, s = %zu, lhs = %.6f, rhs = %.6f", r.w,
                    r.F2n ? std::to_string(*r.F2n).c_str() : "unresolved", r.s, r.lhs, r.rhs);
      return CheckResult{name, r.status, buf};
    });
  }
  return rep;
}

}  // namespace rfg
