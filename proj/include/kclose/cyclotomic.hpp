#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kclose/errors.hpp"

namespace kclose {

using QRat = boost::multiprecision::cpp_rational;

/// Q(zeta_M) as Q[x] / Phi_M(x).
class CyclotomicField {
 public:
  static std::shared_ptr<const CyclotomicField> make(long M) {
    if (M < 1) throw ConfigError("cyclotomic order must be >= 1");
    return std::shared_ptr<const CyclotomicField>(new CyclotomicField(M));
  }
  long order() const { return M_; }
  int degree() const { return static_cast<int>(phi_.size()) - 1; }
  /// Phi_M, lowest degree first, monic.
  const std::vector<QRat>& modulus() const { return phi_; }

  /// Reduces a polynomial modulo Phi_M.
  std::vector<QRat> reduce(std::vector<QRat> a) const {
    const int n = degree();
    for (int i = static_cast<int>(a.size()) - 1; i >= n; --i) {
      const QRat c = a[i];
      if (c == 0) continue;
      for (int j = 0; j <= n; ++j) a[i - n + j] -= c * phi_[j];
    }
    a.resize(n);
    return a;
  }

 private:
  explicit CyclotomicField(long M) : M_(M) {
    // Phi_M = (x^M - 1) / prod_{k | M, k < M} Phi_k, by exact division over Z.
    std::vector<QRat> num(M + 1, 0);
    num[0] = -1;
    num[M] = 1;
    for (long k = 1; k < M; ++k)
      if (M % k == 0) num = divide(num, CyclotomicField(k, true).phi_);
    phi_ = num;
  }
  CyclotomicField(long M, bool) : CyclotomicField(M) {}

  static std::vector<QRat> divide(std::vector<QRat> a, const std::vector<QRat>& b) {
    const int db = static_cast<int>(b.size()) - 1;
    std::vector<QRat> q(a.size() - db, 0);
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
      const QRat c = a[i] / b[db];
      q[i - db] = c;
      for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return q;
  }

  long M_;
  std::vector<QRat> phi_;
};

using CycFieldPtr = std::shared_ptr<const CyclotomicField>;

/// Element of Q(zeta_M) in the power basis 1, z, ..., z^{phi(M)-1}.
class Cyc {
 public:
  Cyc() = default;
  Cyc(CycFieldPtr K, std::vector<QRat> c) : K_(std::move(K)), c_(K_->reduce(std::move(c))) {}
  static Cyc rational(const CycFieldPtr& K, const QRat& r) { return Cyc(K, {r}); }
  /// zeta_M^k.
  static Cyc zeta(const CycFieldPtr& K, long k) {
    const long M = K->order();
    k = ((k % M) + M) % M;
    std::vector<QRat> c(k + 1, 0);
    c[k] = 1;
    return Cyc(K, c);
  }

  const CycFieldPtr& field() const { return K_; }
  const std::vector<QRat>& coeffs() const { return c_; }
  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  Cyc operator+(const Cyc& o) const {
    std::vector<QRat> c = c_;
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
    return Cyc(K_, c);
  }
  Cyc operator-(const Cyc& o) const {
    std::vector<QRat> c = c_;
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
    return Cyc(K_, c);
  }
  Cyc operator-() const { return Cyc(K_, {0}) - *this; }
  Cyc operator*(const Cyc& o) const {
    std::vector<QRat> c(c_.size() + o.c_.size(), 0);
    for (size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0)
        for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return Cyc(K_, c);
  }
  /// Inverse by the extended Euclidean algorithm against Phi_M.
  Cyc inv() const {
    if (is_zero()) throw MathError("inverse of zero in a cyclotomic field");
    using P = std::vector<QRat>;
    auto trimmed = [](P a) {
      while (!a.empty() && a.back() == 0) a.pop_back();
      return a;
    };
    auto sub_mul = [](const P& a, const P& b, const QRat& c, int shift) {
      P r = a;
      if (r.size() < b.size() + shift) r.resize(b.size() + shift, 0);
      for (size_t i = 0; i < b.size(); ++i) r[i + shift] -= c * b[i];
      return r;
    };
    P r0 = K_->modulus(), r1 = trimmed(c_);
    P s0 = {}, s1 = {1};
    while (r1.size() > 1) {
      P r = r0, s = s0;
      while (r.size() >= r1.size()) {
        const QRat c = r.back() / r1.back();
        const int sh = static_cast<int>(r.size() - r1.size());
        r = trimmed(sub_mul(r, r1, c, sh));
        s = trimmed(sub_mul(s, s1, c, sh));
        if (r.empty()) break;
      }
      r0 = r1, s0 = s1, r1 = r, s1 = s;
      if (r1.empty()) throw MathError("cyclotomic inverse: element shares a factor with the modulus");
    }
    for (auto& x : s1) x /= r1[0];
    return Cyc(K_, s1);
  }
  Cyc operator/(const Cyc& o) const { return *this * o.inv(); }

  friend bool operator==(const Cyc& a, const Cyc& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

  std::string str() const {
    std::string out;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const QRat a = c_[i] < 0 ? QRat(-c_[i]) : c_[i];
      std::string term = i == 0 ? a.str() : (a == 1 ? "" : a.str() + "*") + "z" + (i > 1 ? "^" + std::to_string(i) : "");
      out += out.empty() ? (c_[i] < 0 ? "-" + term : term) : (c_[i] < 0 ? " - " + term : " + " + term);
    }
    return out.empty() ? "0" : out;
  }

 private:
  CycFieldPtr K_;
  std::vector<QRat> c_;
};

/// sqrt(p) in Q(zeta_M); needs 8 | M for p = 2 and 4p | M otherwise.
inline Cyc sqrt_prime(const CycFieldPtr& K, long p) {
  const long M = K->order();
  if (p == 2) {
    if (M % 8) throw ConfigError("sqrt(2) needs 8 | M");
    return Cyc::zeta(K, M / 8) + Cyc::zeta(K, -M / 8);
  }
  if (M % (4 * p)) throw ConfigError("sqrt(p) needs 4p | M");
  // Quadratic Gauss sum g = sum (a/p) zeta_p^a, g^2 = (-1)^{(p-1)/2} p.
  Cyc g = Cyc::rational(K, 0);
  for (long a = 1; a < p; ++a) {
    long b = 1;
    for (long e = 0; e < (p - 1) / 2; ++e) b = b * a % p;
    const long s = b == 1 ? 1 : -1;
    g = g + Cyc::rational(K, s) * Cyc::zeta(K, a * (M / p));
  }
  if (p % 4 == 1) return g;
  return -(Cyc::zeta(K, M / 4) * g);
}

/// q^{k/2} for q = p^f and any integer k.
inline Cyc half_power(const CycFieldPtr& K, long p, int f, long k) {
  const long e = static_cast<long>(f) * k;
  QRat r = 1;
  const long whole = e >= 0 ? e / 2 : -((-e + 1) / 2);
  for (long i = 0; i < std::abs(whole); ++i) r = whole >= 0 ? QRat(r * p) : QRat(r / p);
  Cyc out = Cyc::rational(K, r);
  if (e - 2 * whole == 1) out = out * sqrt_prime(K, p);
  return out;
}

// ---- rational functions in X over Q(zeta_M) ---------------------------------------

using CycPoly = std::vector<Cyc>;  ///< lowest degree first, no trailing zeros

namespace detail {
inline CycPoly cp_trim(CycPoly a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}
inline CycPoly cp_mul(const CycPoly& a, const CycPoly& b) {
  if (a.empty() || b.empty()) return {};
  const auto& K = a[0].field();
  CycPoly c(a.size() + b.size() - 1, Cyc::rational(K, 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = c[i + j] + a[i] * b[j];
  return cp_trim(c);
}
inline CycPoly cp_add(const CycPoly& a, const CycPoly& b) {
  const CycPoly& big = a.size() >= b.size() ? a : b;
  const CycPoly& small = a.size() >= b.size() ? b : a;
  CycPoly c = big;
  for (size_t i = 0; i < small.size(); ++i) c[i] = c[i] + small[i];
  return cp_trim(c);
}
inline std::pair<CycPoly, CycPoly> cp_divmod(CycPoly a, const CycPoly& b) {
  if (b.empty()) throw MathError("polynomial division by zero");
  const auto& K = b[0].field();
  CycPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Cyc::rational(K, 0));
  const Cyc lead_inv = b.back().inv();
  a = cp_trim(a);
  while (a.size() >= b.size()) {
    const Cyc c = a.back() * lead_inv;
    const size_t sh = a.size() - b.size();
    q[sh] = c;
    for (size_t i = 0; i < b.size(); ++i) a[sh + i] = a[sh + i] - c * b[i];
    a = cp_trim(a);
  }
  return {cp_trim(q), a};
}
inline CycPoly cp_gcd(CycPoly a, CycPoly b) {
  a = cp_trim(a), b = cp_trim(b);
  while (!b.empty()) {
    auto r = cp_divmod(a, b).second;
    a = b, b = r;
  }
  return a;
}
}  // namespace detail

/// num / den in X = q^{-s}; den monic and coprime to num.
class ZetaRational {
 public:
  ZetaRational() = default;
  ZetaRational(CycPoly num, CycPoly den) { set(std::move(num), std::move(den)); }
  static ZetaRational constant(const Cyc& c) { return ZetaRational({c}, {Cyc::rational(c.field(), 1)}); }
  /// c X^k for any integer k.
  static ZetaRational monomial(const Cyc& c, int k) {
    const auto& K = c.field();
    CycPoly x(std::abs(k) + 1, Cyc::rational(K, 0));
    x[std::abs(k)] = Cyc::rational(K, 1);
    if (k >= 0) {
      CycPoly n = x;
      n[k] = c;
      return ZetaRational(n, {Cyc::rational(K, 1)});
    }
    return ZetaRational({c}, x);
  }

  const CycPoly& num() const { return num_; }
  const CycPoly& den() const { return den_; }
  bool is_zero() const { return num_.empty(); }

  ZetaRational operator+(const ZetaRational& o) const {
    return ZetaRational(detail::cp_add(detail::cp_mul(num_, o.den_), detail::cp_mul(o.num_, den_)),
                        detail::cp_mul(den_, o.den_));
  }
  ZetaRational operator*(const ZetaRational& o) const {
    return ZetaRational(detail::cp_mul(num_, o.num_), detail::cp_mul(den_, o.den_));
  }
  ZetaRational operator/(const ZetaRational& o) const {
    if (o.is_zero()) throw MathError("division by the zero rational function");
    return ZetaRational(detail::cp_mul(num_, o.den_), detail::cp_mul(den_, o.num_));
  }
  friend bool operator==(const ZetaRational& a, const ZetaRational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const ZetaRational& a, const ZetaRational& b) { return !(a == b); }

  /// (c, k) when the function is c X^k.
  std::optional<std::pair<Cyc, int>> as_monomial() const {
    if (num_.empty()) return std::nullopt;
    auto single = [](const CycPoly& p) -> int {
      int idx = -1;
      for (size_t i = 0; i < p.size(); ++i)
        if (!p[i].is_zero()) {
          if (idx >= 0) return -1;
          idx = static_cast<int>(i);
        }
      return idx;
    };
    const int a = single(num_), b = single(den_);
    if (a < 0 || b < 0) return std::nullopt;
    return std::make_pair(num_[a] / den_[b], a - b);
  }

  static std::string poly_str(const CycPoly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + p[i].str() + ")";
      if (i > 0) out += i == 1 ? "*X" : "*X^" + std::to_string(i);
    }
    return out;
  }
  std::string str() const { return "[" + poly_str(num_) + "] / [" + poly_str(den_) + "]"; }

 private:
  void set(CycPoly num, CycPoly den) {
    num = detail::cp_trim(num), den = detail::cp_trim(den);
    if (den.empty()) throw MathError("zero denominator");
    const auto& K = den[0].field();
    if (num.empty()) {
      num_ = {};
      den_ = {Cyc::rational(K, 1)};
      return;
    }
    const CycPoly g = detail::cp_gcd(num, den);
    num = detail::cp_divmod(num, g).first;
    den = detail::cp_divmod(den, g).first;
    const Cyc li = den.back().inv();
    for (auto& x : num) x = x * li;
    for (auto& x : den) x = x * li;
    num_ = num, den_ = den;
  }

  CycPoly num_;
  CycPoly den_;
};

}  // namespace kclose
