#pragma once

// Detection floors for lamplighter kernel candidates: no quotient of order
// below n detects v, checked exhaustively over the catalog, together with an
// explicit quotient that does detect it.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfg/catalog.hpp"
#include "rfg/detect.hpp"
#include "rfg/errors.hpp"
#include "rfg/family.hpp"
#include "rfg/parallel.hpp"
#include "rfg/wreath.hpp"

namespace rfg {

struct FloorCounterexample {
  std::size_t group_index = 0;
  std::vector<Elem> images;
};

struct FloorReport {
  int n = 0;
  std::size_t groups_checked = 0;
  std::size_t homs_checked = 0;
  std::vector<FloorCounterexample> counterexamples;

  bool passed() const { return counterexamples.empty(); }
};

/// Every relation-respecting (a, t) -> Q with |Q| < n sends v to 1.
inline FloorReport detection_floor_verify(const KernelCandidate& v, int n, const Catalog& catalog, unsigned jobs = 1) {
  if (n < 1) throw InputError("floor parameter n must be >= 1");
  if (catalog.bound() < n - 1)
    throw ResourceError("catalog bound " + std::to_string(catalog.bound()) + " is below n - 1 = " +
                        std::to_string(n - 1));
  const GroupFamily f = v.modulus ? GroupFamily::lamplighter(v.modulus) : GroupFamily::lamplighter_z();
  const Word w = wreath_geodesic_word(v.v);

  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (catalog.at(i).order() < static_cast<std::size_t>(n)) targets.push_back(i);

  std::vector<std::size_t> homs(targets.size(), 0);
  std::vector<std::optional<FloorCounterexample>> bad(targets.size());
  parallel_for(targets.size(), jobs, [&](std::size_t s) {
    const auto& Q = catalog.at(targets[s]).table;
    const Elem q = static_cast<Elem>(Q.order());
    for (Elem a = 0; a < q; ++a)
      for (Elem t = 0; t < q; ++t) {
        const std::vector<Elem> im{a, t};
        if (!hom_check(f, Q, im)) continue;
        ++homs[s];
        if (!bad[s] && evaluate_word(Q, im, w) != Q.identity()) bad[s] = FloorCounterexample{targets[s], im};
      }
  });

  FloorReport rep;
  rep.n = n;
  rep.groups_checked = targets.size();
  for (std::size_t s = 0; s < targets.size(); ++s) {
    rep.homs_checked += homs[s];
    if (bad[s]) rep.counterexamples.push_back(*bad[s]);
  }
  return rep;
}

/// An explicit detecting quotient Z/p wr Z/R (Z/2 wr Z/R for the integer
/// lamplighter, reducing coefficients mod 2 after making them coprime).
/// R is the least period whose collapse of v is nonzero in the lamp ring.
struct ExplicitDetector {
  long long lamp_modulus = 0;
  long long period = 0;
  double order_log2 = 0;  // log2 of lamp_modulus^period * period

  std::string describe() const {
    return "Z/" + std::to_string(lamp_modulus) + " wr Z/" + std::to_string(period);
  }
};

inline std::optional<ExplicitDetector> explicit_detector(const KernelCandidate& v, long long max_period = 4096) {
  long long q = v.modulus;
  if (q == 0) {
    // smallest prime not dividing every coefficient
    for (q = 2;; ++q) {
      if (!detail::is_prime(q)) continue;
      bool all = true;
      for (long long c : v.w) all = all && c % q == 0;
      if (!all) break;
    }
  }
  const LampRing ring{q};
  std::map<long long, long long> sup;
  for (const auto& [pos, c] : v.v.support())
    if (long long r = ring.normalize(c)) sup[pos] = r;
  const WreathElement vq(std::move(sup), 0, ring);
  for (long long R = 1; R <= max_period; ++R) {
    const auto col = ap_collapse(vq, R);
    bool nonzero = false;
    for (long long c : col) nonzero = nonzero || c != 0;
    if (nonzero) return ExplicitDetector{q, R, static_cast<double>(R) * std::log2(static_cast<double>(q)) +
                                                   std::log2(static_cast<double>(R))};
  }
  return std::nullopt;
}

}  // namespace rfg
