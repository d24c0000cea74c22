#pragma once

// Finite groups as explicit multiplication tables, closure of generator
// tuples in a concrete universe, and the structural invariants used by the
// quotient search.
//
// Series indexing: the lower central series is G_0 = G, G_k = [G_{k-1}, G]
// and the nilpotency class is the least k with G_k = 1 (abelian groups have
// class 1, the trivial group class 0). The derived series is indexed the
// same way. This is the one place the convention is fixed; every class or
// length reported by the library follows it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rfg/errors.hpp"

namespace rfg {

using Elem = std::uint16_t;

class FiniteGroupTable {
 public:
  FiniteGroupTable() : FiniteGroupTable(trivial()) {}

  static FiniteGroupTable trivial() {
    FiniteGroupTable g(1);
    g.mul_ = {0};
    g.finish();
    return g;
  }

  /// Builds from a full row-major multiplication table. Verifies the group
  /// axioms exhaustively (associativity is O(n^3), cheap at catalog orders).
  static FiniteGroupTable from_table(std::size_t order, std::vector<Elem> mul, std::vector<Elem> gens,
                                     bool verify = true) {
    if (order == 0 || order > 65535) throw InputError("group order out of range");
    if (mul.size() != order * order) throw InputError("multiplication table has wrong size");
    for (Elem x : mul)
      if (x >= order) throw InputError("multiplication table entry out of range");
    FiniteGroupTable g(order);
    g.mul_ = std::move(mul);
    g.gens_ = std::move(gens);
    for (Elem x : g.gens_)
      if (x >= order) throw InputError("generator index out of range");
    g.finish();
    if (verify) g.verify_axioms();
    return g;
  }

  std::size_t order() const { return order_; }
  Elem identity() const { return id_; }
  Elem mul(Elem a, Elem b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  const std::vector<Elem>& gens() const { return gens_; }
  const std::vector<Elem>& table() const { return mul_; }
  const std::string& iso_key() const { return iso_key_; }

  Elem pow(Elem a, long long k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    k %= static_cast<long long>(element_order(a));
    Elem r = id_;
    for (long long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  std::size_t element_order(Elem a) const { return orders_[a]; }

  Elem commutator(Elem a, Elem b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }

  bool is_abelian() const {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < a; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  void verify_axioms() const {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b)
        for (Elem c = 0; c < order_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw InputError("multiplication table is not associative");
    if (generated_subgroup(gens_).size() != order_) throw InputError("marked generators do not generate the group");
  }

  /// Elements of the subgroup generated by `gens`, sorted.
  std::vector<Elem> generated_subgroup(std::span<const Elem> gens) const {
    std::vector<char> in(order_, 0);
    std::vector<Elem> elems{id_};
    in[id_] = 1;
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (Elem g : gens) {
        Elem x = mul(elems[i], g);
        if (!in[x]) {
          in[x] = 1;
          elems.push_back(x);
        }
      }
    std::sort(elems.begin(), elems.end());
    return elems;
  }

  /// [A, B] = <[a,b] : a in A, b in B>.
  std::vector<Elem> commutator_subgroup(std::span<const Elem> A, std::span<const Elem> B) const {
    std::vector<char> seen(order_, 0);
    std::vector<Elem> comms;
    for (Elem a : A)
      for (Elem b : B) {
        Elem c = commutator(a, b);
        if (!seen[c]) {
          seen[c] = 1;
          comms.push_back(c);
        }
      }
    return generated_subgroup(comms);
  }

  std::vector<Elem> all_elements() const {
    std::vector<Elem> v(order_);
    std::iota(v.begin(), v.end(), Elem{0});
    return v;
  }

  /// Orders of G_0 = G, G_1, ... until the series stabilizes.
  std::vector<std::size_t> lower_central_series() const {
    std::vector<std::size_t> out;
    const auto all = all_elements();
    std::vector<Elem> cur = all;
    while (true) {
      out.push_back(cur.size());
      if (cur.size() == 1) break;
      auto next = commutator_subgroup(cur, all);
      if (next.size() == cur.size()) break;
      cur = std::move(next);
    }
    return out;
  }

  std::vector<std::size_t> derived_series() const {
    std::vector<std::size_t> out;
    std::vector<Elem> cur = all_elements();
    while (true) {
      out.push_back(cur.size());
      if (cur.size() == 1) break;
      auto next = commutator_subgroup(cur, cur);
      if (next.size() == cur.size()) break;
      cur = std::move(next);
    }
    return out;
  }

  std::size_t center_size() const {
    std::size_t n = 0;
    for (Elem a = 0; a < order_; ++a) {
      bool central = true;
      for (Elem b = 0; b < order_ && central; ++b) central = mul(a, b) == mul(b, a);
      n += central;
    }
    return n;
  }

  std::size_t centralizer_size(Elem a) const {
    std::size_t n = 0;
    for (Elem b = 0; b < order_; ++b) n += mul(a, b) == mul(b, a);
    return n;
  }

  /// Greedy small generating set: repeatedly add the highest-order element
  /// outside the current subgroup.
  std::vector<Elem> small_generating_set() const {
    std::vector<Elem> gens;
    std::vector<Elem> sub{id_};
    while (sub.size() < order_) {
      std::vector<char> in(order_, 0);
      for (Elem x : sub) in[x] = 1;
      Elem best = 0;
      std::size_t best_size = 0;
      for (Elem a = 0; a < order_; ++a) {
        if (in[a]) continue;
        auto trial = gens;
        trial.push_back(a);
        std::size_t s = generated_subgroup(trial).size();
        if (s > best_size) {
          best_size = s;
          best = a;
        }
      }
      gens.push_back(best);
      sub = generated_subgroup(gens);
    }
    return gens;
  }

 private:
  explicit FiniteGroupTable(std::size_t order) : order_(order) {}

  void finish() {
    id_ = order_;
    for (Elem e = 0; e < order_ && id_ == order_; ++e) {
      bool ok = true;
      for (Elem a = 0; a < order_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) id_ = e;
    }
    if (id_ == order_) throw InputError("multiplication table has no identity");
    inv_.assign(order_, 0);
    for (Elem a = 0; a < order_; ++a) {
      bool found = false;
      for (Elem b = 0; b < order_ && !found; ++b)
        if (mul(a, b) == id_ && mul(b, a) == id_) {
          inv_[a] = b;
          found = true;
        }
      if (!found) throw InputError("multiplication table element without two-sided inverse");
    }
    orders_.assign(order_, 0);
    for (Elem a = 0; a < order_; ++a) {
      std::size_t k = 1;
      Elem x = a;
      while (x != id_) {
        x = mul(x, a);
        if (++k > order_) throw InputError("multiplication table element of infinite order");
      }
      orders_[a] = k;
    }
    iso_key_ = compute_iso_key();
  }

  // Isomorphism-invariant fingerprint: order, series, center, and the sorted
  // multiset of (element order, centralizer size, order of square).
  std::string compute_iso_key() const {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> profile;
    for (Elem a = 0; a < order_; ++a)
      profile.emplace_back(orders_[a], centralizer_size(a), orders_[mul(a, a)]);
    std::sort(profile.begin(), profile.end());
    std::ostringstream os;
    os << order_ << "|z" << center_size() << "|l";
    for (auto s : lower_central_series()) os << s << ',';
    os << "|d";
    for (auto s : derived_series()) os << s << ',';
    os << "|p";
    for (auto [o, c, q] : profile) os << o << '.' << c << '.' << q << ',';
    return os.str();
  }

  std::size_t order_;
  std::vector<Elem> mul_;
  std::vector<Elem> inv_;
  std::vector<std::size_t> orders_;
  Elem id_ = 0;
  std::vector<Elem> gens_;
  std::string iso_key_;
};

/// Nilpotency class (least k with G_k = 1), or nullopt when not nilpotent.
inline std::optional<int> nilpotency_class(const FiniteGroupTable& g) {
  auto lcs = g.lower_central_series();
  if (lcs.back() != 1) return std::nullopt;
  return static_cast<int>(lcs.size()) - 1;
}

/// Derived length (least k with G^(k) = 1), or nullopt when not solvable.
inline std::optional<int> derived_length(const FiniteGroupTable& g) {
  auto ds = g.derived_series();
  if (ds.back() != 1) return std::nullopt;
  return static_cast<int>(ds.size()) - 1;
}

/// Subgroup generated by `gens` inside a universe with multiplication `mul`.
/// Elements are discovered breadth-first (identity first, then generators);
/// the table is filled by following each element's Cayley-graph path, so
/// only products with generators are ever evaluated in the universe.
template <class T, class Mul, class Hash = std::hash<T>, class Eq = std::equal_to<T>>
FiniteGroupTable closure_from_generators(std::span<const T> gens, const T& identity, Mul mul,
                                         std::size_t cap = 65535) {
  cap = std::min<std::size_t>(cap, 65535);
  std::vector<T> elems{identity};
  std::unordered_map<T, Elem, Hash, Eq> index;
  index.emplace(identity, 0);
  std::vector<std::pair<Elem, std::uint16_t>> parent{{0, 0}};
  std::vector<std::vector<Elem>> right;  // right[e][g] = e * gens[g]
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::vector<Elem> row(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      T x = mul(elems[i], gens[g]);
      auto it = index.find(x);
      if (it == index.end()) {
        if (elems.size() >= cap) throw ResourceError("closure exceeds cap of " + std::to_string(cap) + " elements");
        Elem id = static_cast<Elem>(elems.size());
        index.emplace(x, id);
        elems.push_back(std::move(x));
        parent.emplace_back(static_cast<Elem>(i), static_cast<std::uint16_t>(g));
        row[g] = id;
      } else {
        row[g] = it->second;
      }
    }
    right.push_back(std::move(row));
  }
  const std::size_t n = elems.size();
  // path[b] = generator sequence spelling b from the identity.
  std::vector<std::vector<std::uint16_t>> path(n);
  for (std::size_t b = 1; b < n; ++b) {
    path[b] = path[parent[b].first];
    path[b].push_back(parent[b].second);
  }
  std::vector<Elem> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Elem x = static_cast<Elem>(a);
      for (auto g : path[b]) x = right[x][g];
      table[a * n + b] = x;
    }
  std::vector<Elem> gen_idx;
  for (std::size_t g = 0; g < gens.size(); ++g) gen_idx.push_back(right[0][g]);
  return FiniteGroupTable::from_table(n, std::move(table), std::move(gen_idx), /*verify=*/false);
}

/// Permutation of {0..degree-1}; product p*q applies p first, then q.
struct Perm {
  std::vector<std::uint8_t> img;

  static Perm identity(std::size_t degree) {
    Perm p;
    p.img.resize(degree);
    std::iota(p.img.begin(), p.img.end(), std::uint8_t{0});
    return p;
  }
  /// From disjoint cycles given with 1-based points, e.g. {{1,2},{3,4,5}}.
  static Perm from_cycles(std::size_t degree, std::initializer_list<std::initializer_list<int>> cycles) {
    Perm p = identity(degree);
    for (const auto& c : cycles) {
      std::vector<int> pts(c);
      for (std::size_t i = 0; i < pts.size(); ++i)
        p.img.at(static_cast<std::size_t>(pts[i] - 1)) = static_cast<std::uint8_t>(pts[(i + 1) % pts.size()] - 1);
    }
    return p;
  }

  friend Perm operator*(const Perm& p, const Perm& q) {
    Perm r;
    r.img.resize(p.img.size());
    for (std::size_t i = 0; i < p.img.size(); ++i) r.img[i] = q.img[p.img[i]];
    return r;
  }
  friend bool operator==(const Perm&, const Perm&) = default;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : p.img) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline FiniteGroupTable permutation_closure(std::span<const Perm> gens, std::size_t degree, std::size_t cap = 65535) {
  return closure_from_generators<Perm, std::multiplies<>, PermHash>(gens, Perm::identity(degree), std::multiplies<>{},
                                                                     cap);
}

/// Right-regular representation: g acts on element indices by x -> x g.
inline std::vector<Perm> regular_permutations(const FiniteGroupTable& g, std::span<const Elem> elems) {
  if (g.order() > 256) throw ResourceError("regular representation limited to degree 256");
  std::vector<Perm> out;
  for (Elem e : elems) {
    Perm p;
    p.img.resize(g.order());
    for (Elem x = 0; x < g.order(); ++x) p.img[x] = static_cast<std::uint8_t>(g.mul(x, e));
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

// Given images for the generating set `gens` of G, extend to a map on all of
// G along a breadth-first spanning tree and check it is a homomorphism into
// H (and, if requested, a bijection). Returns the map or nullopt.
inline std::optional<std::vector<Elem>> extend_generator_map(const FiniteGroupTable& G, const FiniteGroupTable& H,
                                                             std::span<const Elem> gens,
                                                             std::span<const Elem> images, bool bijective) {
  const std::size_t n = G.order();
  constexpr Elem kUnset = 65535;
  std::vector<Elem> phi(n, kUnset);
  phi[G.identity()] = H.identity();
  std::vector<Elem> queue{G.identity()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Elem x = queue[i];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Elem y = G.mul(x, gens[k]);
      Elem img = H.mul(phi[x], images[k]);
      if (phi[y] == kUnset) {
        phi[y] = img;
        queue.push_back(y);
      } else if (phi[y] != img) {
        return std::nullopt;
      }
    }
  }
  if (queue.size() != n) return std::nullopt;  // gens do not generate G
  for (Elem x = 0; x < n; ++x)
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (phi[G.mul(x, gens[k])] != H.mul(phi[x], images[k])) return std::nullopt;
  if (bijective) {
    std::vector<char> hit(H.order(), 0);
    for (Elem y : phi) {
      if (hit[y]) return std::nullopt;
      hit[y] = 1;
    }
  }
  return phi;
}

// Enumerates image tuples for `gens` in H whose element orders match, calling
// visit(images) for each; stops early when visit returns true.
template <class Visit>
bool for_each_order_matched_tuple(const FiniteGroupTable& G, const FiniteGroupTable& H, std::span<const Elem> gens,
                                  Visit&& visit) {
  std::vector<std::vector<Elem>> choices(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (Elem y = 0; y < H.order(); ++y)
      if (H.element_order(y) == G.element_order(gens[k])) choices[k].push_back(y);
  std::vector<Elem> tuple(gens.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == gens.size()) return visit(std::span<const Elem>(tuple));
    for (Elem y : choices[k]) {
      tuple[k] = y;
      if (rec(k + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace detail

inline std::optional<std::vector<Elem>> find_isomorphism(const FiniteGroupTable& G, const FiniteGroupTable& H) {
  if (G.order() != H.order() || G.iso_key() != H.iso_key()) return std::nullopt;
  const auto gens = G.small_generating_set();
  std::optional<std::vector<Elem>> found;
  detail::for_each_order_matched_tuple(G, H, gens, [&](std::span<const Elem> imgs) {
    found = detail::extend_generator_map(G, H, gens, imgs, true);
    return found.has_value();
  });
  return found;
}

inline bool isomorphic(const FiniteGroupTable& G, const FiniteGroupTable& H) { return find_isomorphism(G, H).has_value(); }

/// All automorphisms, each as the image list of every element.
inline std::vector<std::vector<Elem>> automorphisms(const FiniteGroupTable& G) {
  std::vector<std::vector<Elem>> out;
  const auto gens = G.small_generating_set();
  detail::for_each_order_matched_tuple(G, G, gens, [&](std::span<const Elem> imgs) {
    if (auto phi = detail::extend_generator_map(G, G, gens, imgs, true)) out.push_back(std::move(*phi));
    return false;
  });
  return out;
}

}  // namespace rfg
