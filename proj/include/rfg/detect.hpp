#pragma once

// Minimal detecting quotients by exhaustive homomorphism search over the
// catalog, and normal subgroup counts of free groups.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfg/catalog.hpp"
#include "rfg/errors.hpp"
#include "rfg/family.hpp"
#include "rfg/parallel.hpp"

namespace rfg {

class PropertyP {
 public:
  enum class Kind { Any, Solvable, Nilpotent, PGroup };

  static PropertyP any() { return PropertyP(Kind::Any, 0); }
  static PropertyP solvable() { return PropertyP(Kind::Solvable, 0); }
  static PropertyP nilpotent() { return PropertyP(Kind::Nilpotent, 0); }
  static PropertyP p_group(int p) {
    if (!detail::is_prime_small(p)) throw InputError("p-group property needs a prime p");
    return PropertyP(Kind::PGroup, p);
  }

  /// "any", "sol", "nil", "p<prime>".
  static PropertyP parse(const std::string& s) {
    if (s == "any") return any();
    if (s == "sol" || s == "solvable") return solvable();
    if (s == "nil" || s == "nilpotent") return nilpotent();
    if (s.size() > 1 && s[0] == 'p') {
      try {
        return p_group(std::stoi(s.substr(1)));
      } catch (const std::logic_error&) {
      }
    }
    throw InputError("unknown property '" + s + "' (expected any, sol, nil, p<prime>)");
  }

  Kind kind() const { return kind_; }
  int p() const { return p_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Any: return "any";
      case Kind::Solvable: return "sol";
      case Kind::Nilpotent: return "nil";
      case Kind::PGroup: return "p" + std::to_string(p_);
    }
    return "?";
  }

  bool holds(const CatalogEntry& g) const {
    switch (kind_) {
      case Kind::Any: return true;
      case Kind::Solvable: return g.derived_len.has_value();
      case Kind::Nilpotent: return g.nil_class.has_value();
      case Kind::PGroup: return g.order() == 1 || g.prime == p_;
    }
    return false;
  }

  friend bool operator==(const PropertyP&, const PropertyP&) = default;

 private:
  PropertyP(Kind k, int p) : kind_(k), p_(p) {}
  Kind kind_;
  int p_;
};

/// Image of a word under generator images in Q.
inline Elem evaluate_word(const FiniteGroupTable& Q, std::span<const Elem> images, const Word& w) {
  Elem x = Q.identity();
  for (const Letter& l : w.letters()) x = Q.mul(x, l.sign > 0 ? images[l.gen] : Q.inv(images[l.gen]));
  return x;
}

inline Elem evaluate_element(const GroupFamily& f, const FiniteGroupTable& Q, std::span<const Elem> images,
                             const Element& e) {
  if (const auto* m = std::get_if<long long>(&e)) return Q.pow(images[0], *m);
  if (const auto* w = std::get_if<Word>(&e)) return evaluate_word(Q, images, *w);
  return evaluate_word(Q, images, element_word(f, e));
}

/// Whether the generator assignment extends to a homomorphism family -> Q.
inline bool hom_check(const GroupFamily& f, const FiniteGroupTable& Q, std::span<const Elem> images) {
  if (images.size() != static_cast<std::size_t>(f.rank()))
    throw InputError("image tuple length does not match the family's rank");
  switch (f.kind()) {
    case GroupFamily::Kind::Free:
    case GroupFamily::Kind::IntegerLine: return true;
    case GroupFamily::Kind::Surface: {
      static const Word relator = surface_relator();
      return evaluate_word(Q, images, relator) == Q.identity();
    }
    case GroupFamily::Kind::LamplighterModP:
    case GroupFamily::Kind::LamplighterZ: {
      const Elem alpha = images[0], tau = images[1];
      if (f.kind() == GroupFamily::Kind::LamplighterModP && Q.pow(alpha, f.p()) != Q.identity()) return false;
      const std::size_t r = Q.element_order(tau);
      Elem conj_left = Q.identity(), conj_right = Q.identity();  // tau^-i, tau^i
      for (std::size_t i = 1; i <= r; ++i) {
        conj_left = Q.mul(conj_left, Q.inv(tau));
        conj_right = Q.mul(conj_right, tau);
        Elem c = Q.mul(Q.mul(conj_left, alpha), conj_right);
        if (Q.mul(c, alpha) != Q.mul(alpha, c)) return false;
      }
      return true;
    }
  }
  return false;
}

struct DetectionWitness {
  std::size_t group_index = 0;
  std::vector<Elem> images;
  Elem image = 0;  // image of the queried element, never the identity
};

struct DetectionResult {
  std::optional<std::size_t> value;  // nullopt: exceeds the catalog bound
  int bound = 0;
  std::optional<DetectionWitness> witness;

  bool resolved() const { return value.has_value(); }
  /// "6", or "> 16" when unresolved.
  std::string display() const { return value ? std::to_string(*value) : "> " + std::to_string(bound); }
};

namespace detail {

// First image tuple (lexicographic, first coordinate most significant) that
// respects the family's relations and detects `e`.
inline std::optional<DetectionWitness> first_detecting_tuple(const GroupFamily& f, const Element& e,
                                                             const Word& w, const FiniteGroupTable& Q,
                                                             std::size_t group_index) {
  const std::size_t r = static_cast<std::size_t>(f.rank());
  const std::size_t n = Q.order();
  std::vector<Elem> tuple(r, 0);
  const auto* m = std::get_if<long long>(&e);
  while (true) {
    if (hom_check(f, Q, tuple)) {
      Elem img = m ? Q.pow(tuple[0], *m) : evaluate_word(Q, tuple, w);
      if (img != Q.identity()) return DetectionWitness{group_index, tuple, img};
    }
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (++tuple[k] < n) break;
      tuple[k] = 0;
      if (k == 0) return std::nullopt;
    }
    if (r == 0) return std::nullopt;
  }
}

}  // namespace detail

/// D^P(element): least order of a catalog group with property P admitting a
/// homomorphism from the family that does not kill the element. Groups are
/// scanned by ascending order; within an order, the lowest catalog index with
/// a hit wins, and its lexicographically first tuple is the witness. Since
/// every supported P is subgroup-closed, non-surjective maps never undercut
/// the true minimum.
inline DetectionResult detect(const GroupFamily& f, const Element& e, const PropertyP& P, const Catalog& catalog,
                              unsigned jobs = 1) {
  if (is_identity(f, e)) throw InputError("detect needs a nontrivial element");
  const Word w = std::holds_alternative<long long>(e) ? Word{} : element_word(f, e);
  DetectionResult res;
  res.bound = catalog.bound();
  std::size_t i = 0;
  while (i < catalog.size()) {
    std::size_t j = i;
    while (j < catalog.size() && catalog.at(j).order() == catalog.at(i).order()) ++j;
    std::vector<std::size_t> eligible;
    for (std::size_t k = i; k < j; ++k)
      if (P.holds(catalog.at(k))) eligible.push_back(k);
    std::vector<std::optional<DetectionWitness>> hits(eligible.size());
    parallel_for(eligible.size(), jobs, [&](std::size_t s) {
      hits[s] = detail::first_detecting_tuple(f, e, w, catalog.at(eligible[s]).table, eligible[s]);
    });
    for (auto& h : hits)
      if (h) {
        res.value = catalog.at(h->group_index).order();
        res.witness = std::move(h);
        return res;
      }
    i = j;
  }
  return res;
}

/// Number of r-tuples of Q generating Q.
inline std::size_t generating_tuple_count(const FiniteGroupTable& Q, int rank) {
  const std::size_t n = Q.order();
  std::vector<Elem> tuple(static_cast<std::size_t>(rank), 0);
  std::size_t count = 0;
  while (true) {
    count += Q.generated_subgroup(tuple).size() == n;
    std::size_t k = tuple.size();
    while (k > 0) {
      --k;
      if (++tuple[k] < n) break;
      tuple[k] = 0;
      if (k == 0) return count;
    }
    if (tuple.empty()) return count;
  }
}

/// s^normal(n) for the free group of the given rank: kernels of surjections
/// onto groups of order n, i.e. generating tuples modulo Aut(Q), summed over
/// the isomorphism classes of order n.
inline std::size_t normal_subgroup_count(int n, const Catalog& catalog, int rank = 2) {
  if (n < 1) throw InputError("index must be >= 1");
  if (n > catalog.bound()) throw ResourceError("index " + std::to_string(n) + " exceeds catalog bound");
  std::size_t total = 0;
  for (const auto& g : catalog.groups()) {
    if (g.order() != static_cast<std::size_t>(n)) continue;
    const std::size_t gen = generating_tuple_count(g.table, rank);
    if (gen % g.aut_order != 0) throw InternalError("Aut(Q) does not act freely on generating tuples");
    total += gen / g.aut_order;
  }
  return total;
}

}  // namespace rfg
