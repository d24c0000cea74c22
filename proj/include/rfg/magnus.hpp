#pragma once

// Truncated Magnus expansion of free-group words.
//
// x_i maps to 1 + X_i and x_i^-1 to 1 - X_i + X_i^2 - ... in the free
// associative algebra Z<<X_1..X_r>> truncated at a degree cap. A nontrivial
// word lies in the (k-1)-th term of the lower central series exactly when
// its expansion minus 1 has no terms of degree < k; the least such degree is
// reported as the word's depth.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rfg/errors.hpp"
#include "rfg/status.hpp"
#include "rfg/word.hpp"

namespace rfg {

using BigInt = boost::multiprecision::cpp_int;

/// A noncommutative monomial X_{i1} X_{i2} ... ; ordered by degree, then
/// lexicographically (the canonical print order).
struct Monomial {
  std::vector<std::uint8_t> vars;

  std::size_t degree() const { return vars.size(); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    if (a.vars.size() != b.vars.size()) return a.vars.size() <=> b.vars.size();
    return a.vars <=> b.vars;
  }
};

inline constexpr std::size_t kDefaultMonomialBudget = 1u << 20;

class TruncatedSeries {
 public:
  TruncatedSeries(int cap, std::size_t rank) : cap_(cap), rank_(rank) {
    if (cap < 1) throw InputError("degree cap must be >= 1");
  }

  static TruncatedSeries one(int cap, std::size_t rank) {
    TruncatedSeries s(cap, rank);
    s.coeffs_[Monomial{}] = 1;
    return s;
  }

  int cap() const { return cap_; }
  std::size_t rank() const { return rank_; }
  const std::map<Monomial, BigInt>& coefficients() const { return coeffs_; }

  BigInt coefficient(const Monomial& m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? BigInt(0) : it->second;
  }
  BigInt constant_term() const { return coefficient(Monomial{}); }
  bool invertible() const {
    auto c = constant_term();
    return c == 1 || c == -1;
  }

  void add(const Monomial& m, const BigInt& c) {
    if (static_cast<int>(m.degree()) > cap_) return;
    auto& slot = coeffs_[m];
    slot += c;
    if (slot == 0) coeffs_.erase(m);
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries out(std::min(a.cap_, b.cap_), std::max(a.rank_, b.rank_));
    for (const auto& [ma, ca] : a.coeffs_)
      for (const auto& [mb, cb] : b.coeffs_) {
        if (static_cast<int>(ma.degree() + mb.degree()) > out.cap_) continue;
        Monomial m{ma.vars};
        m.vars.insert(m.vars.end(), mb.vars.begin(), mb.vars.end());
        out.add(m, ca * cb);
      }
    return out;
  }

  /// this * (1 + X_g)^sign, the image of one letter, truncated.
  void multiply_letter(const Letter& l, std::size_t budget = kDefaultMonomialBudget) {
    std::map<Monomial, BigInt> next = coeffs_;
    auto bump = [&](const Monomial& m, const BigInt& c) {
      auto& slot = next[m];
      slot += c;
      if (slot == 0) next.erase(m);
    };
    for (const auto& [m, c] : coeffs_) {
      // sign +1: + X_g; sign -1: sum_{k>=1} (-1)^k X_g^k
      Monomial cur = m;
      BigInt coef = c;
      for (int k = 1; static_cast<int>(m.degree()) + k <= cap_; ++k) {
        cur.vars.push_back(l.gen);
        if (l.sign < 0) coef = -coef;
        bump(cur, coef);
        if (l.sign > 0) break;
      }
    }
    if (next.size() > budget) throw ResourceError("Magnus expansion exceeds the monomial budget");
    coeffs_ = std::move(next);
  }

  /// Canonical text: terms by degree then lexicographic, "X1 X2" notation.
  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : coeffs_) {
      bool neg = c < 0;
      if (!out.empty()) out += neg ? " - " : " + ";
      else if (neg) out += "-";
      BigInt mag = neg ? BigInt(-c) : c;
      std::string term;
      for (auto v : m.vars) term += (term.empty() ? "" : "*") + std::string("X") + std::to_string(v + 1);
      if (term.empty())
        out += mag.str();
      else if (mag == 1)
        out += term;
      else
        out += mag.str() + "*" + term;
    }
    return out;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.cap_ == b.cap_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int cap_;
  std::size_t rank_;
  std::map<Monomial, BigInt> coeffs_;
};

inline constexpr std::size_t kMagnusMaxRank = 2;

inline TruncatedSeries expand(const Word& w, int cap, std::size_t rank = kMagnusMaxRank,
                              std::size_t budget = kDefaultMonomialBudget) {
  if (rank > kMagnusMaxRank) throw ResourceError("Magnus expansion is limited to rank " +
                                                 std::to_string(kMagnusMaxRank));
  for (const Letter& l : w.letters())
    if (l.gen >= rank) throw InputError("word uses a generator beyond the expansion rank");
  TruncatedSeries s = TruncatedSeries::one(cap, rank);
  for (const Letter& l : w.letters()) s.multiply_letter(l, budget);
  return s;
}

struct DepthReport {
  Word word;
  int cap = 0;
  std::optional<int> depth;  // nullopt: every degree 1..cap vanishes ("≥ cap")
  std::map<Monomial, BigInt> leading;

  std::string depth_display() const { return depth ? std::to_string(*depth) : ">= " + std::to_string(cap + 1); }
};

inline DepthReport lcs_depth(const Word& w, int cap, std::size_t rank = kMagnusMaxRank) {
  if (w.empty()) throw InputError("lcs_depth needs a nontrivial word");
  const TruncatedSeries s = expand(w, cap, rank);
  DepthReport r{w, cap, std::nullopt, {}};
  for (const auto& [m, c] : s.coefficients()) {
    if (m.degree() == 0) continue;
    if (!r.depth) r.depth = static_cast<int>(m.degree());
    if (static_cast<int>(m.degree()) != *r.depth) break;
    r.leading.emplace(m, c);
  }
  return r;
}

inline constexpr int kDefaultUIndexBudget = 6;

/// u_1 = x^-2 y^-1 x, u_{n+1} = [x u_n x^-1, y u_n y^-1], freely reduced.
inline Word build_u(int n, int budget = kDefaultUIndexBudget) {
  if (n < 1) throw InputError("u_n is defined for n >= 1");
  if (n > budget) throw ResourceError("u_" + std::to_string(n) + " exceeds the index budget " +
                                     std::to_string(budget));
  const Word x = Word::generator(0), y = Word::generator(1);
  Word u = x.inverse() * x.inverse() * y.inverse() * x;
  for (int k = 1; k < n; ++k) u = commutator(x * u * x.inverse(), y * u * y.inverse());
  return u;
}

struct DoublingReport {
  std::vector<DepthReport> depths;          // u_1 .. u_nmax
  std::vector<CheckStatus> pair_status;     // (u_n, u_{n+1}) for n = 1..nmax-1
  CheckStatus overall = CheckStatus::Pass;
};

/// depth(u_{n+1}) >= 2 depth(u_n) for consecutive indices. A pair whose lower
/// depth is unresolved at the cap is inconclusive; an unresolved upper depth
/// still passes when cap >= 2 depth(u_n).
inline DoublingReport depth_doubling_check(int n_max, int cap, int budget = kDefaultUIndexBudget) {
  if (n_max < 1) throw InputError("n_max must be >= 1");
  DoublingReport rep;
  for (int n = 1; n <= n_max; ++n) rep.depths.push_back(lcs_depth(build_u(n, budget), cap));
  for (int n = 1; n < n_max; ++n) {
    const auto& lo = rep.depths[static_cast<std::size_t>(n - 1)];
    const auto& hi = rep.depths[static_cast<std::size_t>(n)];
    CheckStatus s;
    if (!lo.depth)
      s = CheckStatus::Inconclusive;
    else if (hi.depth)
      s = *hi.depth >= 2 * *lo.depth ? CheckStatus::Pass : CheckStatus::Fail;
    else
      s = cap >= 2 * *lo.depth ? CheckStatus::Pass : CheckStatus::Inconclusive;
    rep.pair_status.push_back(s);
    if (s == CheckStatus::Fail)
      rep.overall = CheckStatus::Fail;
    else if (s == CheckStatus::Inconclusive && rep.overall == CheckStatus::Pass)
      rep.overall = CheckStatus::Inconclusive;
  }
  return rep;
}

}  // namespace rfg
