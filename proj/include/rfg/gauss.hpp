#pragma once

// Exact arithmetic over the Gaussian integers Z[i], 2x2 matrices over Z[i],
// their reductions modulo 2^k and modulo the prime (1-i) = (1+i), and the
// congruence-filtration checks built on them.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rfg/errors.hpp"
#include "rfg/finite_group.hpp"

namespace rfg {

using BigInt = boost::multiprecision::cpp_int;

class GaussInt {
 public:
  GaussInt() = default;
  GaussInt(BigInt re, BigInt im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  GaussInt(long long re, long long im = 0) : re_(re), im_(im) {}
  GaussInt(int re) : re_(re), im_(0) {}

  static GaussInt i() { return {0, 1}; }

  const BigInt& re() const { return re_; }
  const BigInt& im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }

  GaussInt conj() const { return {re_, BigInt(-im_)}; }

  friend GaussInt operator+(const GaussInt& a, const GaussInt& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend GaussInt operator-(const GaussInt& a, const GaussInt& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend GaussInt operator-(const GaussInt& a) { return {BigInt(-a.re_), BigInt(-a.im_)}; }
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend bool operator==(const GaussInt&, const GaussInt&) = default;

  /// Largest j with 2^j dividing both parts; nullopt for 0.
  std::optional<unsigned> two_adic_valuation() const {
    if (is_zero()) return std::nullopt;
    unsigned v = 0;
    BigInt a = re_, b = im_;
    while (a % 2 == 0 && b % 2 == 0) {
      a /= 2;
      b /= 2;
      ++v;
    }
    return v;
  }

  std::string to_string() const {
    if (im_ == 0) return re_.str();
    std::string imag = im_ == 1 ? "i" : im_ == -1 ? "-i" : im_.str() + "i";
    if (re_ == 0) return imag;
    return re_.str() + (im_ > 0 ? "+" : "") + imag;
  }

 private:
  BigInt re_ = 0, im_ = 0;
};

/// ||a||_S with S = {1, i}: |re| + |im|.
inline BigInt s_norm(const GaussInt& a) { return abs(a.re()) + abs(a.im()); }

/// Row-major [[a, b], [c, d]].
class GaussMat2 {
 public:
  GaussMat2() : GaussMat2(1, 0, 0, 1) {}
  GaussMat2(GaussInt a, GaussInt b, GaussInt c, GaussInt d)
      : e_{std::move(a), std::move(b), std::move(c), std::move(d)}, det_(compute_det()) {}

  static GaussMat2 identity() { return {}; }

  const GaussInt& at(int r, int c) const { return e_[static_cast<std::size_t>(2 * r + c)]; }
  const std::array<GaussInt, 4>& entries() const { return e_; }
  const GaussInt& det() const { return det_; }
  GaussInt recompute_det() const { return compute_det(); }
  bool is_special() const { return det_ == GaussInt(1); }

  friend GaussMat2 operator*(const GaussMat2& x, const GaussMat2& y) {
    return {x.at(0, 0) * y.at(0, 0) + x.at(0, 1) * y.at(1, 0), x.at(0, 0) * y.at(0, 1) + x.at(0, 1) * y.at(1, 1),
            x.at(1, 0) * y.at(0, 0) + x.at(1, 1) * y.at(1, 0), x.at(1, 0) * y.at(0, 1) + x.at(1, 1) * y.at(1, 1)};
  }
  friend GaussMat2 operator+(const GaussMat2& x, const GaussMat2& y) {
    return {x.e_[0] + y.e_[0], x.e_[1] + y.e_[1], x.e_[2] + y.e_[2], x.e_[3] + y.e_[3]};
  }
  friend GaussMat2 operator-(const GaussMat2& x, const GaussMat2& y) {
    return {x.e_[0] - y.e_[0], x.e_[1] - y.e_[1], x.e_[2] - y.e_[2], x.e_[3] - y.e_[3]};
  }
  friend GaussMat2 operator-(const GaussMat2& x) { return {-x.e_[0], -x.e_[1], -x.e_[2], -x.e_[3]}; }
  friend bool operator==(const GaussMat2& x, const GaussMat2& y) { return x.e_ == y.e_; }

  /// Inverse of a determinant-1 matrix.
  GaussMat2 sl2_inverse() const {
    if (!is_special()) throw InputError("sl2_inverse needs determinant 1");
    return {e_[3], -e_[1], -e_[2], e_[0]};
  }

  /// Conjugate transpose.
  GaussMat2 adjoint() const { return {e_[0].conj(), e_[2].conj(), e_[1].conj(), e_[3].conj()}; }

  BigInt max_entry_norm() const {
    BigInt m = 0;
    for (const auto& x : e_) m = std::max(m, s_norm(x));
    return m;
  }

 private:
  GaussInt compute_det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  std::array<GaussInt, 4> e_;
  GaussInt det_;
};

/// Bracketed integer pairs: [[(re,im),(re,im)],[(re,im),(re,im)]].
inline std::string format_gauss_mat(const GaussMat2& m) {
  std::string out = "[";
  for (int r = 0; r < 2; ++r) {
    out += r ? ",[" : "[";
    for (int c = 0; c < 2; ++c)
      out += (c ? ",(" : "(") + m.at(r, c).re().str() + "," + m.at(r, c).im().str() + ")";
    out += "]";
  }
  return out + "]";
}

inline GaussMat2 parse_gauss_mat(const std::string& text) {
  std::vector<BigInt> nums;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur == "-" || cur == "+") throw InputError("malformed matrix '" + text + "'");
    nums.emplace_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch)) || ((ch == '-' || ch == '+') && cur.empty())) {
      if (ch != '+') cur += ch;
    } else if (ch == '[' || ch == ']' || ch == '(' || ch == ')' || ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      throw InputError("unexpected character '" + std::string(1, ch) + "' in matrix");
    }
  }
  flush();
  if (nums.size() != 8) throw InputError("matrix needs 4 entries as (re,im) pairs");
  return {GaussInt(nums[0], nums[1]), GaussInt(nums[2], nums[3]), GaussInt(nums[4], nums[5]),
          GaussInt(nums[6], nums[7])};
}

// ---------------------------------------------------------------------------
// Residue rings.

/// Z[i]/2^k with k >= 0 (k = 0 is the zero ring), or the residue field
/// Z[i]/(1-i) = F_2 when `half_step` is set.
struct ResidueLevel {
  unsigned k = 1;
  bool half_step = false;

  long long modulus() const { return half_step ? 2 : (1LL << k); }
  std::size_t ring_order() const { return half_step ? 2 : (std::size_t{1} << (2 * k)); }
  friend bool operator==(const ResidueLevel&, const ResidueLevel&) = default;
};

struct ResidueGauss {
  long long re = 0, im = 0;
  friend bool operator==(const ResidueGauss&, const ResidueGauss&) = default;
  friend auto operator<=>(const ResidueGauss&, const ResidueGauss&) = default;
};

class ResidueMat2 {
 public:
  ResidueMat2(ResidueLevel level, std::array<ResidueGauss, 4> e, bool projective = false)
      : level_(level), projective_(projective), e_(e) {
    for (auto& x : e_) x = normalize(x);
  }

  static ResidueMat2 identity(ResidueLevel level, bool projective = false) {
    return {level, {ResidueGauss{1, 0}, {0, 0}, {0, 0}, {1, 0}}, projective};
  }

  const ResidueLevel& level() const { return level_; }
  bool projective() const { return projective_; }
  const std::array<ResidueGauss, 4>& entries() const { return e_; }
  const ResidueGauss& at(int r, int c) const { return e_[static_cast<std::size_t>(2 * r + c)]; }

  ResidueGauss normalize(ResidueGauss x) const {
    if (level_.half_step) return {(((x.re + x.im) % 2) + 2) % 2, 0};
    const long long m = level_.modulus();
    return {((x.re % m) + m) % m, ((x.im % m) + m) % m};
  }

  ResidueGauss mul(ResidueGauss a, ResidueGauss b) const {
    return normalize({a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re});
  }
  ResidueGauss add(ResidueGauss a, ResidueGauss b) const { return normalize({a.re + b.re, a.im + b.im}); }
  ResidueGauss neg(ResidueGauss a) const { return normalize({-a.re, -a.im}); }

  friend ResidueMat2 operator*(const ResidueMat2& x, const ResidueMat2& y) {
    std::array<ResidueGauss, 4> r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r[static_cast<std::size_t>(2 * i + j)] = x.add(x.mul(x.at(i, 0), y.at(0, j)), x.mul(x.at(i, 1), y.at(1, j)));
    return {x.level_, r, x.projective_};
  }
  friend ResidueMat2 operator+(const ResidueMat2& x, const ResidueMat2& y) {
    std::array<ResidueGauss, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) r[i] = x.add(x.e_[i], y.e_[i]);
    return {x.level_, r, x.projective_};
  }

  ResidueMat2 negated() const {
    std::array<ResidueGauss, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) r[i] = neg(e_[i]);
    return {level_, r, projective_};
  }

  ResidueGauss det() const { return add(mul(e_[0], e_[3]), neg(mul(e_[1], e_[2]))); }

  /// Canonical representative of {M, -M} when projective, else M itself.
  std::array<ResidueGauss, 4> canonical() const {
    if (!projective_) return e_;
    auto n = negated().e_;
    return std::min(e_, n);
  }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const ResidueGauss& x) { return x == ResidueGauss{}; });
  }

  friend bool operator==(const ResidueMat2& x, const ResidueMat2& y) {
    return x.level_ == y.level_ && x.canonical() == y.canonical();
  }

  std::string to_string() const {
    std::string out = "[";
    for (int r = 0; r < 2; ++r) {
      out += r ? ",[" : "[";
      for (int c = 0; c < 2; ++c) {
        const auto& x = at(r, c);
        out += (c ? "," : "") + (level_.half_step ? std::to_string(x.re)
                                                    : "(" + std::to_string(x.re) + "," + std::to_string(x.im) + ")");
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  ResidueLevel level_;
  bool projective_;
  std::array<ResidueGauss, 4> e_;
};

struct ResidueMatHash {
  std::size_t operator()(const ResidueMat2& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& x : m.canonical()) {
      h = (h ^ static_cast<std::size_t>(x.re)) * 1099511628211ull;
      h = (h ^ static_cast<std::size_t>(x.im)) * 1099511628211ull;
    }
    return h;
  }
};

namespace detail {
inline long long small_mod(const BigInt& x, long long m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return static_cast<long long>(r);
}
}  // namespace detail

inline ResidueMat2 reduce(const GaussMat2& A, ResidueLevel level, bool projective = false) {
  std::array<ResidueGauss, 4> e{};
  const long long m = level.half_step ? 2 : level.modulus();
  for (std::size_t i = 0; i < 4; ++i)
    e[i] = {detail::small_mod(A.entries()[i].re(), m), detail::small_mod(A.entries()[i].im(), m)};
  return ResidueMat2(level, e, projective);
}

/// A == 1 mod (1-i), i.e. every entry of A - 1 has even re + im.
inline bool congruent_one_mod_half(const GaussMat2& A) {
  return reduce(A, {0, true}) == ResidueMat2::identity({0, true});
}

// ---------------------------------------------------------------------------
// The congruence filtration.

inline constexpr unsigned kDefaultLevelCap = 64;

namespace detail {
// min over entries of the 2-adic valuation; nullopt when the matrix is zero.
inline std::optional<unsigned> matrix_valuation(const GaussMat2& M) {
  std::optional<unsigned> v;
  for (const auto& x : M.entries())
    if (auto vx = x.two_adic_valuation()) v = v ? std::min(*v, *vx) : *vx;
  return v;
}
}  // namespace detail

/// Least k >= 1 with A != +-1 mod 2^k, or nullopt ("≥ cap") when A = +-1 mod
/// 2^k for every k <= cap (in particular for A = +-1).
inline std::optional<unsigned> g_level(const GaussMat2& A, unsigned cap = kDefaultLevelCap) {
  if (!A.is_special()) throw InputError("g_level needs a determinant-1 matrix");
  const GaussMat2 one = GaussMat2::identity();
  auto vm = detail::matrix_valuation(A - one);
  auto vp = detail::matrix_valuation(A + one);
  if (!vm || !vp) return std::nullopt;
  unsigned level = std::max(*vm, *vp) + 1;
  if (level > cap) return std::nullopt;
  return level;
}

struct KernelGroupReport {
  unsigned k = 0;
  std::size_t order = 0;
  bool is_two_group = false;
  std::size_t max_element_order = 0;
  std::size_t order_bound_log2 = 0;  // 8k

  bool within_bound() const { return order_bound_log2 >= 64 || order <= (std::size_t{1} << order_bound_log2); }
};

inline constexpr unsigned kDefaultGaussLevelBudget = 2;

/// The congruence kernel ker[SL2(Z[i]/2^k) -> SL2(Z[i]/(1-i))] modulo +-1,
/// enumerated by scanning every matrix over the residue ring.
inline KernelGroupReport kernel_2group_check(unsigned k, unsigned budget = kDefaultGaussLevelBudget) {
  if (k > budget) throw ResourceError("kernel enumeration level " + std::to_string(k) + " exceeds budget " +
                                      std::to_string(budget));
  KernelGroupReport rep{k, 1, true, 1, 8 * static_cast<std::size_t>(k)};
  if (k == 0) return rep;
  const ResidueLevel level{k, false};
  const long long m = level.modulus();
  std::vector<ResidueGauss> ring;
  for (long long a = 0; a < m; ++a)
    for (long long b = 0; b < m; ++b) ring.push_back({a, b});
  const ResidueGauss one{1, 0};
  auto half = [](ResidueGauss x) { return (((x.re + x.im) % 2) + 2) % 2; };

  std::vector<ResidueMat2> kernel;
  std::set<std::array<ResidueGauss, 4>> classes;
  for (const auto& a : ring) {
    if (half(a) != 1) continue;
    for (const auto& b : ring) {
      if (half(b) != 0) continue;
      for (const auto& c : ring) {
        if (half(c) != 0) continue;
        for (const auto& d : ring) {
          if (half(d) != 1) continue;
          ResidueMat2 M(level, {a, b, c, d}, true);
          if (M.det() != one) continue;
          if (classes.insert(M.canonical()).second) kernel.push_back(M);
        }
      }
    }
  }
  rep.order = kernel.size();
  const ResidueMat2 id = ResidueMat2::identity(level, true);
  for (const auto& M : kernel) {
    std::size_t ord = 1;
    ResidueMat2 x = M;
    while (!(x == id)) {
      x = x * M;
      ++ord;
    }
    rep.max_element_order = std::max(rep.max_element_order, ord);
    if ((ord & (ord - 1)) != 0) rep.is_two_group = false;
  }
  if ((rep.order & (rep.order - 1)) != 0) rep.is_two_group = false;
  return rep;
}

/// h([A]) = (A - 1) mod 2, additive on the first filtration quotient.
inline ResidueMat2 h_map(const GaussMat2& A) {
  if (!congruent_one_mod_half(A)) throw InputError("h_map needs A = 1 mod (1-i)");
  return reduce(A - GaussMat2::identity(), {1, false});
}

struct NilBound {
  unsigned level = 0;          // k = g_level(A)
  unsigned order_log2 = 0;     // the detecting 2-group has order <= 2^(8k)
  BigInt max_norm;             // max s-norm over entries of A - s, A = s mod 2^(k-1)
  bool norm_mechanism = false; // 2^(k-1) <= max_norm
};

/// Level of A in the filtration and the resulting bound on the smallest
/// detecting nilpotent quotient. Also checks the entry-norm mechanism: a
/// nontrivial A = s mod 2^(k-1) (s = +-1) has an entry of A - s of s-norm at
/// least 2^(k-1).
inline NilBound nil_detect_upper(const GaussMat2& A, unsigned cap = kDefaultLevelCap) {
  if (!A.is_special()) throw InputError("nil_detect_upper needs a determinant-1 matrix");
  if (!congruent_one_mod_half(A)) throw InputError("nil_detect_upper needs A = 1 mod (1-i)");
  const GaussMat2 one = GaussMat2::identity();
  if (A == one || A == -one) throw InputError("projectively trivial matrix has no detecting quotient");
  auto k = g_level(A, cap);
  if (!k) throw ResourceError("level exceeds cap");
  NilBound out;
  out.level = *k;
  out.order_log2 = 8 * *k;
  auto vm = detail::matrix_valuation(A - one).value_or(~0u);
  const GaussMat2 diff = vm + 1 >= *k ? A - one : A + one;
  out.max_norm = diff.max_entry_norm();
  out.norm_mechanism = BigInt(1) << (*k - 1) <= out.max_norm;
  return out;
}

/// lambda = 2 beta (1 + ||1||_S): bounds the s-norm of entries of A -+ 1 for
/// words of length n via lambda^n.
inline BigInt lambda_constant(const BigInt& beta) { return 2 * beta * (1 + s_norm(GaussInt(1))); }

struct GrowthProbe {
  int n = 0;
  BigInt beta;     // max entry s-norm over the generators
  BigInt observed; // max over sampled products
  BigInt bound;    // (2 beta)^n
  bool holds = false;
};

/// Samples `trials` uniformly random products of n generators and compares
/// the largest entry s-norm seen against (2 beta)^n.
inline GrowthProbe entry_growth_probe(const std::vector<GaussMat2>& gens, int n, int trials, std::mt19937_64& rng) {
  if (gens.empty()) throw InputError("need at least one generator");
  if (n < 1) throw InputError("product length must be >= 1");
  GrowthProbe p;
  p.n = n;
  for (const auto& g : gens) p.beta = std::max(p.beta, g.max_entry_norm());
  p.bound = boost::multiprecision::pow(BigInt(2 * p.beta), static_cast<unsigned>(n));
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  for (int t = 0; t < trials; ++t) {
    GaussMat2 A = gens[pick(rng)];
    for (int i = 1; i < n; ++i) A = A * gens[pick(rng)];
    p.observed = std::max(p.observed, A.max_entry_norm());
  }
  p.holds = p.observed <= p.bound;
  return p;
}

// ---------------------------------------------------------------------------
// Circles and the Fuchsian subgroup generators.

/// The circle a|z|^2 + B z + conj(B) conj(z) + c = 0, stored as the Hermitian
/// matrix H = [[a, conj(B)], [B, c]] so that the equation reads v* H v = 0
/// with v = (z, 1)^T. A Moebius map g sends it to (g^-1)* H g^-1.
struct HermitianCircle {
  BigInt a, c;
  GaussInt B;

  GaussMat2 matrix() const { return {GaussInt(a), B.conj(), B, GaussInt(c)}; }
  /// det H = ac - |B|^2 (real).
  BigInt det() const { return a * c - (B.re() * B.re() + B.im() * B.im()); }
};

inline HermitianCircle invariant_circle() { return {2, -2, GaussInt(1, 1)}; }

/// +1 / -1 when g maps the circle to itself (H' = lambda H), else nullopt.
inline std::optional<int> circle_preserved(const GaussMat2& g, const HermitianCircle& C) {
  if (!g.is_special()) throw InputError("circle_preserved needs a determinant-1 matrix");
  if (C.det() >= 0) throw InputError("degenerate circle: Hermitian determinant must be negative");
  const GaussMat2 H = C.matrix();
  const GaussMat2 gi = g.sl2_inverse();
  const GaussMat2 Hp = gi.adjoint() * H * gi;
  if (Hp == H) return 1;
  if (Hp == -H) return -1;
  return std::nullopt;
}

/// Generators x1..x4 of the stabilizer of the circle 2|z|^2 + (1+i)z + (1-i)conj(z) - 2 = 0.
inline std::array<GaussMat2, 4> fuchsian_generators() {
  return {GaussMat2({0, 1}, {1, 1}, {0, 0}, {0, -1}), GaussMat2({-1, 2}, {3, 1}, {1, 1}, {1, -2}),
          GaussMat2({0, 2}, {3, 2}, {1, 0}, {1, -2}), GaussMat2({1, 2}, {2, 3}, {0, -1}, {0, -2})};
}

struct NamedCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Determinants, reductions mod (1+i) and the order of the reduced image.
inline std::vector<NamedCheck> fuchsian_reduction_check() {
  std::vector<NamedCheck> out;
  const auto xs = fuchsian_generators();
  const ResidueLevel f2{0, true};
  const ResidueMat2 id = ResidueMat2::identity(f2, true);
  const ResidueMat2 expect3(f2, {ResidueGauss{0, 0}, {1, 0}, {1, 0}, {1, 0}}, true);
  const ResidueMat2 expect4(f2, {ResidueGauss{1, 0}, {1, 0}, {1, 0}, {0, 0}}, true);
  for (std::size_t i = 0; i < 4; ++i)
    out.push_back({"det(x" + std::to_string(i + 1) + ") = 1", xs[i].is_special() && xs[i].recompute_det() == xs[i].det(),
                   xs[i].det().to_string()});
  std::vector<ResidueMat2> images;
  for (std::size_t i = 0; i < 4; ++i) images.push_back(reduce(xs[i], f2, true));
  out.push_back({"x1 reduces trivially", images[0] == id, images[0].to_string()});
  out.push_back({"x2 reduces trivially", images[1] == id, images[1].to_string()});
  out.push_back({"x3 reduces to [[0,1],[1,1]]", images[2] == expect3, images[2].to_string()});
  out.push_back({"x4 reduces to [[1,1],[1,0]]", images[3] == expect4, images[3].to_string()});

  struct Eq {
    bool operator()(const ResidueMat2& a, const ResidueMat2& b) const { return a == b; }
  };
  const auto image = closure_from_generators<ResidueMat2, std::multiplies<>, ResidueMatHash, Eq>(
      images, id, std::multiplies<>{}, 64);
  bool cyclic = false;
  for (Elem e = 0; e < image.order(); ++e) cyclic = cyclic || image.element_order(e) == image.order();
  out.push_back({"reduction image is cyclic of order 3", image.order() == 3 && cyclic,
                 "order " + std::to_string(image.order())});
  return out;
}

}  // namespace rfg
