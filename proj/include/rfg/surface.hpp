#pragma once

// Genus-2 surface group <a1,b1,a2,b2 | [a1,b1][a2,b2]> and Dehn's algorithm.

#include <array>
#include <vector>

#include "rfg/word.hpp"

namespace rfg {

inline Word surface_relator() {
  const Word a1 = Word::generator(0), b1 = Word::generator(1), a2 = Word::generator(2), b2 = Word::generator(3);
  return commutator(a1, b1) * commutator(a2, b2);
}

namespace detail {

// The 16 cyclic conjugates of the relator and its inverse, each of length 8.
inline const std::vector<std::vector<Letter>>& surface_cyclic_relators() {
  static const std::vector<std::vector<Letter>> rels = [] {
    std::vector<std::vector<Letter>> out;
    for (const Word& r : {surface_relator(), surface_relator().inverse()}) {
      const auto& ls = r.letters();
      for (std::size_t s = 0; s < ls.size(); ++s) {
        std::vector<Letter> rot;
        for (std::size_t i = 0; i < ls.size(); ++i) rot.push_back(ls[(s + i) % ls.size()]);
        out.push_back(std::move(rot));
      }
    }
    return out;
  }();
  return rels;
}

}  // namespace detail

/// Dehn's algorithm: while some subword is more than half of a cyclic
/// conjugate of the relator (or its inverse), replace it by the inverse of
/// the shorter complement. The relator satisfies C'(1/7), so the result is
/// empty iff the input represents the identity.
inline Word dehn_reduce(const Word& input) {
  if (input.letters().empty()) return input;
  for (const Letter& l : input.letters())
    if (l.gen >= 4) throw InputError("surface words use exactly 4 generators");

  const auto& rels = detail::surface_cyclic_relators();
  constexpr std::size_t kRelLen = 8;
  constexpr std::size_t kMinMatch = kRelLen / 2 + 1;

  std::vector<Letter> w = input.letters();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + kMinMatch <= w.size() && !changed; ++i) {
      for (const auto& rel : rels) {
        std::size_t k = 0;
        while (k < kRelLen && i + k < w.size() && w[i + k] == rel[k]) ++k;
        if (k < kMinMatch) continue;
        // w[i..i+k) == rel[0..k), so it equals (rel[k..8))^-1.
        std::vector<Letter> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        for (std::size_t j = kRelLen; j > k; --j) next.push_back(rel[j - 1].inverse());
        next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + k), w.end());
        w = Word::reduce(next, 4).letters();
        changed = true;
        break;
      }
    }
  }
  return Word::reduce(w, 4);
}

inline bool surface_equal(const Word& a, const Word& b) { return dehn_reduce(a * b.inverse()).empty(); }

}  // namespace rfg
