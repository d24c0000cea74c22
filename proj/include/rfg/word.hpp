#pragma once

// Words over a signed generator alphabet, free reduction and the plain-text
// word format ("x y^-1 [x,y] (x y)^3").

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfg/errors.hpp"

namespace rfg {

struct Letter {
  std::uint8_t gen = 0;
  std::int8_t sign = 1;  // +1 or -1

  Letter inverse() const { return {gen, static_cast<std::int8_t>(-sign)}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

class GeneratorAlphabet {
 public:
  explicit GeneratorAlphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("alphabet must have at least one generator");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw InputError("generator names must be nonempty");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw InputError("duplicate generator name '" + names_[i] + "'");
    }
  }

  static GeneratorAlphabet xy() { return GeneratorAlphabet({"x", "y"}); }
  static GeneratorAlphabet surface2() { return GeneratorAlphabet({"a1", "b1", "a2", "b2"}); }
  static GeneratorAlphabet lamplighter() { return GeneratorAlphabet({"a", "t"}); }
  static GeneratorAlphabet line() { return GeneratorAlphabet({"z"}); }

  std::size_t rank() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  int index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

 private:
  std::vector<std::string> names_;
};

/// A freely reduced word. Construction always reduces, so every instance
/// satisfies the no-adjacent-inverses invariant.
class Word {
 public:
  Word() = default;

  /// Reduces `raw` freely. Letters must reference generators below `rank`.
  static Word reduce(std::span<const Letter> raw, std::size_t rank) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (const Letter& l : raw) {
      if (l.gen >= rank) throw InputError("generator index " + std::to_string(l.gen) + " out of range");
      if (l.sign != 1 && l.sign != -1) throw InputError("letter sign must be +1 or -1");
      if (!out.empty() && out.back() == l.inverse())
        out.pop_back();
      else
        out.push_back(l);
    }
    Word w;
    w.letters_ = std::move(out);
    return w;
  }

  static Word generator(std::uint8_t g, int sign = 1) {
    Word w;
    w.letters_.push_back({g, static_cast<std::int8_t>(sign)});
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  friend Word operator*(const Word& a, const Word& b) {
    Word w = a;
    for (const Letter& l : b.letters_) {
      if (!w.letters_.empty() && w.letters_.back() == l.inverse())
        w.letters_.pop_back();
      else
        w.letters_.push_back(l);
    }
    return w;
  }

  Word pow(long long k) const {
    Word base = k < 0 ? inverse() : *this;
    Word out;
    for (long long i = 0, e = k < 0 ? -k : k; i < e; ++i) out = out * base;
    return out;
  }

  /// Exponent sum of generator `g`.
  long long exponent_sum(std::uint8_t g) const {
    long long s = 0;
    for (const Letter& l : letters_)
      if (l.gen == g) s += l.sign;
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() <=> b.length();
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

/// Free-group commutator [a,b] = a b a^-1 b^-1.
inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

inline Word free_reduce(std::span<const Letter> raw, std::size_t rank) { return Word::reduce(raw, rank); }

inline std::string format_word(const Word& w, const GeneratorAlphabet& alpha) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += alpha.name(l.gen);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const GeneratorAlphabet& alpha) : text_(text), alpha_(alpha) {}

  Word parse() {
    Word w = sequence();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("word parse error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Word sequence() {
    Word w;
    while (true) {
      skip_ws();
      if (pos_ == text_.size() || text_[pos_] == ',' || text_[pos_] == ']' || text_[pos_] == ')') break;
      w = w * power();
    }
    return w;
  }

  Word power() {
    Word base = atom();
    if (at('^')) {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view digits = text_.substr(start, pos_ - start);
      if (digits.empty() || digits == "-" || digits == "+") fail("expected integer exponent");
      base = base.pow(std::stoll(std::string(digits)));
    }
    return base;
  }

  Word atom() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      Word a = sequence();
      if (!at(',')) fail("expected ',' in commutator");
      ++pos_;
      Word b = sequence();
      if (!at(']')) fail("expected ']'");
      ++pos_;
      return commutator(a, b);
    }
    if (c == '(') {
      ++pos_;
      Word a = sequence();
      if (!at(')')) fail("expected ')'");
      ++pos_;
      return a;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return identifier(text_.substr(start, pos_ - start), start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // An identifier is a single generator name, the identity "1", or a run of
  // concatenated names ("xy"), split greedily by longest match.
  Word identifier(std::string_view id, std::size_t start) {
    if (int g = alpha_.index_of(id); g >= 0) return Word::generator(static_cast<std::uint8_t>(g));
    if (id == "1") return {};
    Word w;
    std::size_t i = 0;
    while (i < id.size()) {
      std::size_t best = 0;
      int best_gen = -1;
      for (std::size_t g = 0; g < alpha_.rank(); ++g) {
        const std::string& n = alpha_.name(g);
        if (n.size() > best && id.substr(i, n.size()) == n) {
          best = n.size();
          best_gen = static_cast<int>(g);
        }
      }
      if (best_gen < 0) {
        pos_ = start + i;
        fail("unknown generator in '" + std::string(id) + "'");
      }
      w = w * Word::generator(static_cast<std::uint8_t>(best_gen));
      i += best;
    }
    return w;
  }

  std::string_view text_;
  const GeneratorAlphabet& alpha_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the plain-text word format. Accepts generator names with optional
/// integer exponents (`x^-1`, `y^3`), commutators `[u,v]`, grouping `(u)^k`
/// and `1` for the identity.
inline Word parse_word(std::string_view text, const GeneratorAlphabet& alpha) {
  return detail::WordParser(text, alpha).parse();
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const Letter& l : w.letters()) {
      h ^= static_cast<std::size_t>(l.gen) * 2 + (l.sign > 0 ? 1 : 0);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace rfg
