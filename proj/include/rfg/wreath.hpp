#pragma once

// Lamplighter groups Z/pZ wr Z (p prime) and Z wr Z.
//
// An element is a pair (f, s): a finitely supported lamp configuration f on
// Z and the head position s. Multiplication is
//     (f, s) * (g, u) = (f + g(. - s), s + u),
// so t = (0, 1) shifts supports to the right under conjugation:
// t^i a t^-i = delta_i. The generating set is {a = (delta_0, 0), t}.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rfg/errors.hpp"
#include "rfg/word.hpp"

namespace rfg {

/// Lamp coefficient ring: Z/pZ when modulus > 0, Z when modulus == 0.
struct LampRing {
  long long modulus = 0;

  long long normalize(long long c) const {
    if (modulus == 0) return c;
    c %= modulus;
    return c < 0 ? c + modulus : c;
  }
  /// Letters needed to write a^c.
  long long cost(long long c) const {
    if (modulus == 0) return c < 0 ? -c : c;
    c = normalize(c);
    return std::min(c, modulus - c);
  }
  /// Signed exponent realizing cost(c).
  long long geodesic_exponent(long long c) const {
    if (modulus == 0) return c;
    c = normalize(c);
    return c <= modulus - c ? c : c - modulus;
  }
};

class WreathElement {
 public:
  WreathElement() = default;
  WreathElement(std::map<long long, long long> support, long long shift, LampRing ring = {})
      : shift_(shift), ring_(ring) {
    for (auto [pos, c] : support) add_lamp(pos, c);
  }

  static WreathElement lamp(long long pos, long long c, LampRing ring) { return WreathElement({{pos, c}}, 0, ring); }
  static WreathElement a(LampRing ring) { return lamp(0, 1, ring); }
  static WreathElement t(LampRing ring, long long k = 1) { return WreathElement({}, k, ring); }

  const std::map<long long, long long>& support() const { return support_; }
  long long shift() const { return shift_; }
  const LampRing& ring() const { return ring_; }
  bool is_identity() const { return support_.empty() && shift_ == 0; }

  friend WreathElement operator*(const WreathElement& x, const WreathElement& y) {
    WreathElement out = x;
    for (auto [pos, c] : y.support_) out.add_lamp(pos + x.shift_, c);
    out.shift_ = x.shift_ + y.shift_;
    return out;
  }

  WreathElement inverse() const {
    WreathElement out({}, -shift_, ring_);
    for (auto [pos, c] : support_) out.add_lamp(pos - shift_, -c);
    return out;
  }

  friend bool operator==(const WreathElement& a, const WreathElement& b) {
    return a.shift_ == b.shift_ && a.support_ == b.support_;
  }
  friend std::strong_ordering operator<=>(const WreathElement& a, const WreathElement& b) {
    if (auto c = a.shift_ <=> b.shift_; c != 0) return c;
    return a.support_ <=> b.support_;
  }

 private:
  void add_lamp(long long pos, long long c) {
    long long v = ring_.normalize((support_.count(pos) ? support_[pos] : 0) + c);
    if (v == 0)
      support_.erase(pos);
    else
      support_[pos] = v;
  }

  std::map<long long, long long> support_;
  long long shift_ = 0;
  LampRing ring_;
};

/// Serialized as "shift; pos:coeff pos:coeff ...".
inline std::string format_wreath(const WreathElement& e) {
  std::string out = std::to_string(e.shift()) + ";";
  for (auto [pos, c] : e.support()) out += " " + std::to_string(pos) + ":" + std::to_string(c);
  return out;
}

inline WreathElement parse_wreath(const std::string& text, LampRing ring) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw InputError("wreath element must look like 'shift; pos:coeff ...'");
  std::map<long long, long long> sup;
  long long shift = 0;
  try {
    shift = std::stoll(text.substr(0, semi));
    std::size_t i = semi + 1;
    while (i < text.size()) {
      while (i < text.size() && text[i] == ' ') ++i;
      if (i >= text.size()) break;
      std::size_t j = text.find(' ', i);
      std::string tok = text.substr(i, j == std::string::npos ? std::string::npos : j - i);
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw InputError("expected pos:coeff, got '" + tok + "'");
      sup[std::stoll(tok.substr(0, colon))] += std::stoll(tok.substr(colon + 1));
      i = j == std::string::npos ? text.size() : j;
    }
  } catch (const std::logic_error&) {
    throw InputError("malformed wreath element '" + text + "'");
  }
  return WreathElement(std::move(sup), shift, ring);
}

namespace detail {

struct LampWalk {
  long long lo = 0, hi = 0;
  bool left_first = true;
  long long steps = 0;
};

inline LampWalk shortest_lamp_walk(const WreathElement& e) {
  long long lo = std::min(0LL, e.shift()), hi = std::max(0LL, e.shift());
  if (!e.support().empty()) {
    lo = std::min(lo, e.support().begin()->first);
    hi = std::max(hi, e.support().rbegin()->first);
  }
  long long left = (0 - lo) + (hi - lo) + (hi - e.shift());
  long long right = (hi - 0) + (hi - lo) + (e.shift() - lo);
  return {lo, hi, left <= right, std::min(left, right)};
}

}  // namespace detail

/// Exact word length w.r.t. {a, t}: lamp cost plus the shortest walk on Z
/// that starts at 0, visits every lit position and stops at the head.
inline long long wreath_word_length(const WreathElement& e) {
  long long lamps = 0;
  for (auto [pos, c] : e.support()) lamps += e.ring().cost(c);
  return lamps + detail::shortest_lamp_walk(e).steps;
}

/// A geodesic word over {a (gen 0), t (gen 1)} representing `e`.
inline Word wreath_geodesic_word(const WreathElement& e) {
  const auto walk = detail::shortest_lamp_walk(e);
  std::vector<Letter> out;
  std::map<long long, bool> done;
  long long pos = 0;
  auto light = [&] {
    auto it = e.support().find(pos);
    if (it == e.support().end() || done[pos]) return;
    done[pos] = true;
    long long k = e.ring().geodesic_exponent(it->second);
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) out.push_back({0, static_cast<std::int8_t>(k < 0 ? -1 : 1)});
  };
  auto walk_to = [&](long long target) {
    light();
    while (pos != target) {
      int step = target > pos ? 1 : -1;
      out.push_back({1, static_cast<std::int8_t>(step)});
      pos += step;
      light();
    }
  };
  if (walk.left_first) {
    walk_to(walk.lo);
    walk_to(walk.hi);
  } else {
    walk_to(walk.hi);
    walk_to(walk.lo);
  }
  walk_to(e.shift());
  return Word::reduce(out, 2);
}

/// Evaluates a word over {a, t} in the lamplighter group.
inline WreathElement wreath_from_word(const Word& w, LampRing ring) {
  WreathElement out({}, 0, ring);
  const WreathElement a = WreathElement::a(ring), ai = a.inverse();
  const WreathElement t = WreathElement::t(ring), ti = t.inverse();
  for (const Letter& l : w.letters()) {
    if (l.gen == 0)
      out = out * (l.sign > 0 ? a : ai);
    else
      out = out * (l.sign > 0 ? t : ti);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic-progression constraint matrix and kernel candidates.

/// Rows indexed by (modulus r, phase phi), r = 1..n, phi = 0..r-1; row marks
/// the columns j (0-based) with j = phi mod r. m = n(n+1)/2 rows, 2m columns.
class APMatrix {
 public:
  explicit APMatrix(int n) : n_(n) {
    if (n < 1) throw InputError("AP matrix parameter n must be >= 1");
    m_ = static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
    for (int r = 1; r <= n; ++r)
      for (int phi = 0; phi < r; ++phi) {
        std::vector<std::uint8_t> row(2 * m_, 0);
        for (std::size_t j = static_cast<std::size_t>(phi); j < 2 * m_; j += static_cast<std::size_t>(r)) row[j] = 1;
        rows_.push_back(std::move(row));
        labels_.push_back({r, phi});
      }
  }

  int n() const { return n_; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return 2 * m_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::uint8_t>& row(std::size_t i) const { return rows_[i]; }
  std::pair<int, int> label(std::size_t i) const { return labels_[i]; }

  /// A*w over Z (modulus 0) or Z/pZ.
  std::vector<long long> apply(const std::vector<long long>& w, long long modulus = 0) const {
    if (w.size() != cols()) throw InputError("vector length does not match AP matrix columns");
    std::vector<long long> out(rows(), 0);
    LampRing ring{modulus};
    for (std::size_t i = 0; i < rows(); ++i) {
      long long s = 0;
      for (std::size_t j = 0; j < cols(); ++j)
        if (rows_[i][j]) s = ring.normalize(s + w[j]);
      out[i] = s;
    }
    return out;
  }

 private:
  int n_;
  std::size_t m_ = 0;
  std::vector<std::vector<std::uint8_t>> rows_;
  std::vector<std::pair<int, int>> labels_;
};

inline APMatrix build_ap_matrix(int n) { return APMatrix(n); }

struct KernelCandidate {
  int n = 0;
  std::size_t m = 0;
  long long modulus = 0;  // 0 for Z
  std::vector<long long> w;
  WreathElement v;

  long long sup_norm() const {
    long long s = 0;
    for (long long x : w) s = std::max(s, x < 0 ? -x : x);
    return s;
  }
};

namespace detail {

// v = sum_{i=1}^{2m} w_i delta_i, column j sitting at position j+1.
inline WreathElement candidate_element(const std::vector<long long>& w, LampRing ring) {
  std::map<long long, long long> sup;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] != 0) sup[static_cast<long long>(j) + 1] = w[j];
  return WreathElement(std::move(sup), 0, ring);
}

inline long long mod_inverse(long long a, long long p) {
  long long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr != 0) {
    long long q = r / nr;
    std::tie(t, nt) = std::pair{nt, t - q * nt};
    std::tie(r, nr) = std::pair{nr, r - q * nr};
  }
  if (r != 1) throw InputError("element not invertible modulo " + std::to_string(p));
  return t < 0 ? t + p : t;
}

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// Nonzero w with A w = 0 mod p, from the reduced row echelon form: the first
/// free column is set to 1 and pivots are solved for.
inline KernelCandidate kernel_mod_p(const APMatrix& A, long long p) {
  if (!detail::is_prime(p)) throw InputError("kernel_mod_p needs a prime modulus");
  const std::size_t rows = A.rows(), cols = A.cols();
  std::vector<std::vector<long long>> M(rows, std::vector<long long>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M[i][j] = A.at(i, j) % p;

  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[r]);
    long long inv = detail::mod_inverse(M[r][c], p);
    for (auto& x : M[r]) x = x * inv % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      long long f = M[i][c];
      for (std::size_t j = 0; j < cols; ++j) M[i][j] = ((M[i][j] - f * M[r][j]) % p + p) % p;
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (free_col < cols && is_pivot[free_col]) ++free_col;
  if (free_col == cols) throw InternalError("AP matrix has trivial kernel mod p");

  std::vector<long long> w(cols, 0);
  w[free_col] = 1;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) w[pivot_cols[i]] = (p - M[i][free_col]) % p;

  LampRing ring{p};
  return {A.n(), A.rows(), p, w, detail::candidate_element(w, ring)};
}

/// Nonzero integer w with A w = 0 and max |w_i| <= m + 2. A rational kernel
/// basis is made primitive-integral, then small combinations of basis vectors
/// are searched for the smallest sup-norm. Throws InternalError when the
/// bound cannot be met.
inline KernelCandidate small_integer_kernel(const APMatrix& A) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  const std::size_t rows = A.rows(), cols = A.cols();
  std::vector<std::vector<cpp_rational>> M(rows, std::vector<cpp_rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M[i][j] = A.at(i, j);

  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[r]);
    cpp_rational inv = 1 / M[r][c];
    for (auto& x : M[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      cpp_rational f = M[i][c];
      for (std::size_t j = 0; j < cols; ++j) M[i][j] -= f * M[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<long long>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<cpp_rational> q(cols, 0);
    q[f] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) q[pivot_cols[i]] = -M[i][f];
    cpp_int den = 1;
    for (const auto& x : q) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x));
    std::vector<cpp_int> zi(cols);
    cpp_int g = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      zi[j] = boost::multiprecision::numerator(cpp_rational(q[j] * den));
      g = boost::multiprecision::gcd(g, zi[j]);
    }
    std::vector<long long> v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = static_cast<long long>(zi[j] / g);
    basis.push_back(std::move(v));
  }
  if (basis.empty()) throw InternalError("AP matrix has trivial integer kernel");

  // Primitive, sign-normalized; rank by (sup norm, l1 norm, lexicographic).
  auto normalize = [](std::vector<long long> v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    auto first = std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; });
    if (*first < 0)
      for (auto& x : v) x = -x;
    return v;
  };
  auto key = [](const std::vector<long long>& v) {
    long long sup = 0, l1 = 0;
    for (long long x : v) {
      sup = std::max(sup, x < 0 ? -x : x);
      l1 += x < 0 ? -x : x;
    }
    return std::pair{sup, l1};
  };
  std::vector<long long> best;
  auto consider = [&](std::vector<long long> v) {
    if (std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; })) return;
    v = normalize(std::move(v));
    if (best.empty() || std::pair{key(v), v} < std::pair{key(best), best}) best = std::move(v);
  };
  for (const auto& b : basis) consider(b);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      for (int s : {1, -1}) {
        std::vector<long long> v(cols);
        for (std::size_t k = 0; k < cols; ++k) v[k] = basis[i][k] + s * basis[j][k];
        consider(std::move(v));
      }

  KernelCandidate out{A.n(), A.rows(), 0, best, detail::candidate_element(best, LampRing{0})};
  if (out.sup_norm() > static_cast<long long>(A.rows()) + 2)
    throw InternalError("no integer kernel vector within the pigeonhole bound m+2 was found");
  return out;
}

/// Period-r sums of v's lamps: out[phi] = sum of coefficients at positions
/// congruent to phi mod r.
inline std::vector<long long> ap_collapse(const WreathElement& v, long long r) {
  if (r < 1) throw InputError("collapse period must be >= 1");
  std::vector<long long> out(static_cast<std::size_t>(r), 0);
  for (auto [pos, c] : v.support()) {
    auto phase = static_cast<std::size_t>(((pos % r) + r) % r);
    out[phase] = v.ring().normalize(out[phase] + c);
  }
  return out;
}

}  // namespace rfg
