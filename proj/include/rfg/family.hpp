#pragma once

// Supported group families, their elements, word metrics and metric balls.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rfg/errors.hpp"
#include "rfg/surface.hpp"
#include "rfg/word.hpp"
#include "rfg/wreath.hpp"

namespace rfg {

class GroupFamily {
 public:
  enum class Kind { Free, Surface, LamplighterModP, LamplighterZ, IntegerLine };

  static GroupFamily free(int rank) {
    if (rank < 1 || rank > 8) throw InputError("free group rank must be in 1..8");
    return GroupFamily(Kind::Free, rank, 0);
  }
  static GroupFamily surface() { return GroupFamily(Kind::Surface, 4, 0); }
  static GroupFamily lamplighter(long long p) {
    if (!detail::is_prime(p)) throw InputError("lamplighter modulus must be prime");
    return GroupFamily(Kind::LamplighterModP, 2, p);
  }
  static GroupFamily lamplighter_z() { return GroupFamily(Kind::LamplighterZ, 2, 0); }
  static GroupFamily integer_line() { return GroupFamily(Kind::IntegerLine, 1, 0); }

  /// Parses "free2", "surface2", "lamp3", "lampz", "z".
  static GroupFamily parse(const std::string& s) {
    if (s == "z") return integer_line();
    if (s == "surface2" || s == "surface") return surface();
    if (s == "lampz") return lamplighter_z();
    try {
      if (s.rfind("free", 0) == 0 && s.size() > 4) return free(std::stoi(s.substr(4)));
      if (s.rfind("lamp", 0) == 0 && s.size() > 4) return lamplighter(std::stoll(s.substr(4)));
    } catch (const std::logic_error&) {
    }
    throw InputError("unknown group family '" + s + "' (expected free<r>, surface2, lamp<p>, lampz, z)");
  }

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  long long p() const { return p_; }
  bool is_lamplighter() const { return kind_ == Kind::LamplighterModP || kind_ == Kind::LamplighterZ; }
  LampRing lamp_ring() const { return LampRing{p_}; }

  std::string name() const {
    switch (kind_) {
      case Kind::Free: return "free" + std::to_string(rank_);
      case Kind::Surface: return "surface2";
      case Kind::LamplighterModP: return "lamp" + std::to_string(p_);
      case Kind::LamplighterZ: return "lampz";
      case Kind::IntegerLine: return "z";
    }
    return "?";
  }

  GeneratorAlphabet alphabet() const {
    switch (kind_) {
      case Kind::Free: {
        if (rank_ == 2) return GeneratorAlphabet::xy();
        std::vector<std::string> names;
        for (int i = 1; i <= rank_; ++i) names.push_back("x" + std::to_string(i));
        return GeneratorAlphabet(names);
      }
      case Kind::Surface: return GeneratorAlphabet::surface2();
      case Kind::LamplighterModP:
      case Kind::LamplighterZ: return GeneratorAlphabet::lamplighter();
      case Kind::IntegerLine: return GeneratorAlphabet::line();
    }
    return GeneratorAlphabet::xy();
  }

  friend bool operator==(const GroupFamily&, const GroupFamily&) = default;

 private:
  GroupFamily(Kind k, int rank, long long p) : kind_(k), rank_(rank), p_(p) {}
  Kind kind_;
  int rank_;
  long long p_;
};

/// Free/Surface: a reduced word (Dehn-reduced for Surface); IntegerLine: m;
/// lamplighters: the wreath normal form.
using Element = std::variant<Word, long long, WreathElement>;

inline Element identity_element(const GroupFamily& f) {
  switch (f.kind()) {
    case GroupFamily::Kind::IntegerLine: return 0LL;
    case GroupFamily::Kind::LamplighterModP:
    case GroupFamily::Kind::LamplighterZ: return WreathElement({}, 0, f.lamp_ring());
    default: return Word{};
  }
}

/// Normalizes a word in the family's generators into an Element.
inline Element element_from_word(const GroupFamily& f, const Word& w) {
  for (const Letter& l : w.letters())
    if (l.gen >= f.rank()) throw InputError("word uses a generator outside the family's alphabet");
  switch (f.kind()) {
    case GroupFamily::Kind::Free: return w;
    case GroupFamily::Kind::Surface: return dehn_reduce(w);
    case GroupFamily::Kind::IntegerLine: return w.exponent_sum(0);
    default: return wreath_from_word(w, f.lamp_ring());
  }
}

/// A word in the family's generators representing `e` (geodesic for all
/// families except Surface, where it is the stored Dehn-reduced word).
inline Word element_word(const GroupFamily& f, const Element& e) {
  if (const auto* w = std::get_if<Word>(&e)) return *w;
  if (const auto* m = std::get_if<long long>(&e)) return Word::generator(0).pow(*m);
  return wreath_geodesic_word(std::get<WreathElement>(e));
  (void)f;
}

inline bool is_identity(const GroupFamily& f, const Element& e) {
  if (f.kind() == GroupFamily::Kind::Surface) return dehn_reduce(std::get<Word>(e)).empty();
  if (const auto* w = std::get_if<Word>(&e)) return w->empty();
  if (const auto* m = std::get_if<long long>(&e)) return *m == 0;
  return std::get<WreathElement>(e).is_identity();
}

inline Element multiply(const GroupFamily& f, const Element& a, const Element& b) {
  switch (f.kind()) {
    case GroupFamily::Kind::Free: return std::get<Word>(a) * std::get<Word>(b);
    case GroupFamily::Kind::Surface: return dehn_reduce(std::get<Word>(a) * std::get<Word>(b));
    case GroupFamily::Kind::IntegerLine: return std::get<long long>(a) + std::get<long long>(b);
    default: return std::get<WreathElement>(a) * std::get<WreathElement>(b);
  }
}

inline Element inverse(const GroupFamily& f, const Element& a) {
  switch (f.kind()) {
    case GroupFamily::Kind::Free:
    case GroupFamily::Kind::Surface: return std::get<Word>(a).inverse();
    case GroupFamily::Kind::IntegerLine: return -std::get<long long>(a);
    default: return std::get<WreathElement>(a).inverse();
  }
}

inline bool elements_equal(const GroupFamily& f, const Element& a, const Element& b) {
  if (f.kind() == GroupFamily::Kind::Surface) return surface_equal(std::get<Word>(a), std::get<Word>(b));
  return a == b;
}

inline std::string format_element(const GroupFamily& f, const Element& e) {
  if (const auto* m = std::get_if<long long>(&e)) return std::to_string(*m);
  if (const auto* w = std::get_if<Word>(&e)) return format_word(*w, f.alphabet());
  return format_wreath(std::get<WreathElement>(e));
}

/// Parses an element: integers for "z", "shift; pos:coeff ..." or a word for
/// lamplighters, words otherwise.
inline Element parse_element(const GroupFamily& f, const std::string& text) {
  if (f.kind() == GroupFamily::Kind::IntegerLine) {
    std::size_t used = 0;
    long long m = 0;
    try {
      m = std::stoll(text, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used > 0 && text.find_first_not_of(" \t", used) == std::string::npos) return m;
  }
  if (f.is_lamplighter() && text.find(';') != std::string::npos) return parse_wreath(text, f.lamp_ring());
  return element_from_word(f, parse_word(text, f.alphabet()));
}

struct LengthResult {
  long long value = 0;
  bool exact = true;  // false: upper bound (Surface)
};

inline LengthResult word_length(const GroupFamily& f, const Element& e) {
  switch (f.kind()) {
    case GroupFamily::Kind::Free: return {static_cast<long long>(std::get<Word>(e).length()), true};
    case GroupFamily::Kind::Surface: return {static_cast<long long>(dehn_reduce(std::get<Word>(e)).length()), false};
    case GroupFamily::Kind::IntegerLine: {
      long long m = std::get<long long>(e);
      return {m < 0 ? -m : m, true};
    }
    default: return {wreath_word_length(std::get<WreathElement>(e)), true};
  }
}

struct BallElement {
  Element element;
  long long length = 0;  // exact graph distance from the identity
};

inline constexpr std::size_t kDefaultBallBudget = 2'000'000;

namespace detail {

inline std::vector<Element> generator_elements(const GroupFamily& f) {
  std::vector<Element> gens;
  for (int g = 0; g < f.rank(); ++g)
    for (int s : {1, -1}) {
      Element e = element_from_word(f, Word::generator(static_cast<std::uint8_t>(g), s));
      bool dup = false;
      for (const auto& h : gens) dup = dup || elements_equal(f, h, e);
      if (!dup) gens.push_back(e);
    }
  return gens;
}

// Surface elements are bucketed by abelianization before the Dehn test.
inline std::vector<long long> abelian_image(const Word& w) {
  std::vector<long long> v(4, 0);
  for (const Letter& l : w.letters()) v[l.gen] += l.sign;
  return v;
}

}  // namespace detail

/// Breadth-first enumeration of the radius-n ball. Returns the nontrivial
/// elements with their exact word lengths, in discovery order (length, then
/// generator order), which is deterministic.
inline std::vector<BallElement> ball_enumerate(const GroupFamily& f, long long n,
                                               std::size_t budget = kDefaultBallBudget) {
  if (n < 0) throw InputError("ball radius must be >= 0");
  std::vector<BallElement> out;
  if (n == 0) return out;
  const auto gens = detail::generator_elements(f);

  if (f.kind() == GroupFamily::Kind::IntegerLine) {
    for (long long k = 1; k <= n; ++k) {
      out.push_back({k, k});
      out.push_back({-k, k});
    }
    return out;
  }

  std::vector<Element> frontier{identity_element(f)};
  std::set<Word> seen_words;
  std::set<WreathElement> seen_wreath;
  std::map<std::vector<long long>, std::vector<Word>> seen_surface;
  auto insert = [&](const Element& e) -> bool {
    switch (f.kind()) {
      case GroupFamily::Kind::Free: return seen_words.insert(std::get<Word>(e)).second;
      case GroupFamily::Kind::Surface: {
        const Word& w = std::get<Word>(e);
        auto& bucket = seen_surface[detail::abelian_image(w)];
        for (const Word& u : bucket)
          if (surface_equal(u, w)) return false;
        bucket.push_back(w);
        return true;
      }
      default: return seen_wreath.insert(std::get<WreathElement>(e)).second;
    }
  };
  insert(frontier.front());
  for (long long len = 1; len <= n; ++len) {
    std::vector<Element> next;
    for (const auto& e : frontier)
      for (const auto& g : gens) {
        Element x = multiply(f, e, g);
        if (!insert(x)) continue;
        if (out.size() >= budget) throw ResourceError("ball enumeration exceeds budget of " + std::to_string(budget));
        out.push_back({x, len});
        next.push_back(std::move(x));
      }
    frontier = std::move(next);
  }
  return out;
}

/// w(n): number of elements of length <= n, identity included.
inline std::size_t word_growth(const GroupFamily& f, long long n, std::size_t budget = kDefaultBallBudget) {
  return ball_enumerate(f, n, budget).size() + 1;
}

}  // namespace rfg
