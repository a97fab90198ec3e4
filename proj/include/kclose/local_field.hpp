#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "kclose/errors.hpp"
#include "kclose/galois_ring.hpp"
#include "kclose/residue_field.hpp"

namespace kclose {

/// Sentinel valuation of the zero element.
inline constexpr int kInfVal = INT_MAX / 4;

/**
 * Parameters of a local field model. characteristic is either p (the field
 * F_q((t))) or 0 (the Eisenstein extension of W(F_q)[1/p] with pi^e = p).
 */
struct FieldSpec {
  int characteristic = 0;
  int p = 2;
  int f = 1;
  std::optional<int> e;
  int N = 6;

  long q() const { return ipow(p, f); }
  bool equal_char() const { return characteristic != 0; }
  /// Ramification index; equal-characteristic fields never carry, reported as INT_MAX.
  int ram() const { return equal_char() ? INT_MAX : *e; }
  std::string describe() const {
    std::string s = equal_char() ? "F_" + std::to_string(q()) + "((t))"
                                 : "char0(p=" + std::to_string(p) + ",f=" + std::to_string(f) +
                                       ",e=" + std::to_string(*e) + ")";
    return s + "[N=" + std::to_string(N) + "]";
  }
  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.characteristic == b.characteristic && a.p == b.p && a.f == b.f && a.e == b.e && a.N == b.N;
  }
};

/// Validated constructor; characteristic is 0 or p.
inline FieldSpec make_local_field(int characteristic, int p, int f, std::optional<int> e, int N) {
  if (!is_prime(p)) throw ConfigError("p must be prime, got " + std::to_string(p));
  if (f < 1) throw ConfigError("f must be >= 1");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (characteristic != 0 && characteristic != p)
    throw ConfigError("characteristic must be 0 or p");
  if (characteristic != 0 && e.has_value())
    throw ConfigError("ramification index e is only meaningful in characteristic 0");
  if (characteristic == 0) {
    if (!e.has_value()) throw ConfigError("characteristic 0 requires e");
    if (*e < 1) throw ConfigError("e must be >= 1");
  }
  return FieldSpec{characteristic, p, f, e, N};
}

class LocalField;
using LocalFieldPtr = std::shared_ptr<const LocalField>;
using Digits = boost::container::small_vector<uint32_t, 12>;

/**
 * An element known modulo P^precision. A nonzero element is pi^valuation times
 * a unit whose Teichmuller digits are stored (digits[0] != 0). A zero element
 * has valuation kInfVal and no digits: it is only known to lie in P^precision.
 */
class Elem {
 public:
  Elem() = default;

  const LocalFieldPtr& field() const { return F_; }
  bool is_zero() const { return val_ == kInfVal; }
  int valuation() const { return val_; }
  int precision() const { return prec_; }
  int rel_precision() const { return is_zero() ? 0 : prec_ - val_; }
  const Digits& digits() const { return d_; }
  /// Digit at pi^k; zero below the valuation, error at or beyond the precision.
  uint32_t digit(int k) const {
    if (k >= prec_) throw PrecisionError("digit requested beyond precision");
    if (is_zero() || k < val_) return 0;
    return d_[k - val_];
  }
  bool is_unit() const { return !is_zero() && val_ == 0; }

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.val_ == b.val_ && a.prec_ == b.prec_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

  inline Elem operator+(const Elem& o) const;
  inline Elem operator-(const Elem& o) const;
  inline Elem operator-() const;
  inline Elem operator*(const Elem& o) const;
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }

 private:
  friend class LocalField;
  LocalFieldPtr F_;
  int val_ = kInfVal;
  int prec_ = 0;
  Digits d_;
};

/**
 * Arithmetic model of a local field: F_q((t)) in equal characteristic, and in
 * characteristic 0 the ring W(F_q)[pi]/(pi^e - p) with elements stored through
 * their Teichmuller digits and multiplied through polynomials in pi over a
 * truncated Witt ring.
 */
class LocalField : public std::enable_shared_from_this<LocalField> {
 public:
  static LocalFieldPtr make(const FieldSpec& s) {
    static std::mutex mu;
    static std::vector<LocalFieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& c : cache)
      if (c->spec_ == s) return c;
    auto F = LocalFieldPtr(new LocalField(s));
    cache.push_back(F);
    return F;
  }

  const FieldSpec& spec() const { return spec_; }
  const ResidueField& residue() const { return *k_; }
  const ResidueFieldPtr& residue_ptr() const { return k_; }
  bool equal_char() const { return spec_.equal_char(); }
  int p() const { return spec_.p; }
  int N() const { return spec_.N; }
  long q() const { return k_->q(); }

  // ---- constructors -------------------------------------------------------

  Elem zero(int prec) const {
    Elem x;
    x.F_ = self();
    x.val_ = kInfVal;
    x.prec_ = prec;
    return x;
  }
  /// Element with the given digits starting at pi^val; leading zero digits are stripped.
  Elem from_digits(int val, const Digits& digits) const {
    for (auto a : digits)
      if (a >= k_->q()) throw ConfigError("digit out of residue range");
    size_t k = 0;
    while (k < digits.size() && digits[k] == 0) ++k;
    const int prec = val + static_cast<int>(digits.size());
    if (k == digits.size()) return zero(prec);
    Elem x;
    x.F_ = self();
    x.val_ = val + static_cast<int>(k);
    x.prec_ = prec;
    x.d_.assign(digits.begin() + k, digits.end());
    return x;
  }
  Elem from_digits(int val, const std::vector<uint32_t>& digits) const {
    return from_digits(val, Digits(digits.begin(), digits.end()));
  }
  /// Teichmuller representative of a residue, times pi^val, with rel precision rel.
  Elem teich(uint32_t a, int val = 0, int rel = -1) const {
    if (rel < 0) rel = N();
    Digits d(rel, 0);
    d[0] = a;
    return from_digits(val, d);
  }
  Elem one(int rel = -1) const { return teich(1, 0, rel); }
  Elem uniformizer_power(int k, int rel = -1) const { return teich(1, k, rel); }
  /// The integer n known modulo P^prec.
  Elem from_int(long n, int prec = -1) const {
    if (prec < 0) prec = N();
    if (prec <= 0) return zero(prec);
    if (equal_char()) return teich(k_->from_int(n), 0, prec);
    const auto& W = witt(witt_len(prec));
    Ring c(e(), W.zero());
    c[0] = W.from_int(n);
    return from_ring_form(c, W, 0, prec);
  }
  /// sum_i n_i pi^i, known modulo P^prec (integer coefficients).
  Elem from_int_poly(const std::vector<long>& coeffs, int prec = -1) const {
    if (prec < 0) prec = N();
    Elem acc = zero(prec);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (static_cast<int>(i) >= prec) break;
      acc = add(acc, mul(from_int(coeffs[i], prec - static_cast<int>(i)), uniformizer_power(static_cast<int>(i), prec - static_cast<int>(i))));
    }
    return acc;
  }

  // ---- arithmetic ---------------------------------------------------------

  Elem add(const Elem& x, const Elem& y) const { return add_impl(x, y, false); }
  Elem sub(const Elem& x, const Elem& y) const { return add_impl(x, y, true); }
  Elem neg(const Elem& x) const {
    check(x);
    if (x.is_zero()) return x;
    Elem r = x;
    r.d_ = neg_digits(x.d_, x.rel_precision());
    return r;
  }
  Elem mul(const Elem& x, const Elem& y) const {
    check(x);
    check(y);
    if (x.is_zero() || y.is_zero()) {
      const int px = x.is_zero() ? x.prec_ : x.val_;
      const int py = y.is_zero() ? y.prec_ : y.val_;
      const int prec = std::min(x.is_zero() ? px + py : x.val_ + y.prec_, y.is_zero() ? px + py : y.val_ + x.prec_);
      return zero(std::min(prec, kInfVal));
    }
    const int R = std::min(x.rel_precision(), y.rel_precision());
    Elem r;
    r.F_ = self();
    r.val_ = x.val_ + y.val_;
    r.prec_ = r.val_ + R;
    r.d_ = mul_digits(x.d_, y.d_, R);
    return r;
  }
  Elem inv(const Elem& x) const {
    check(x);
    if (x.is_zero()) throw MathError("inversion of zero (element vanishes to its precision)");
    Elem r;
    r.F_ = self();
    r.val_ = -x.val_;
    r.prec_ = r.val_ + x.rel_precision();
    r.d_ = inv_digits(x.d_, x.rel_precision());
    return r;
  }
  /// x * pi^k, exact.
  Elem shift(const Elem& x, int k) const {
    Elem r = x;
    if (!r.is_zero()) r.val_ += k;
    r.prec_ += k;
    return r;
  }
  /// Explicitly forget digits at and beyond absolute index prec.
  Elem truncate(const Elem& x, int prec) const {
    if (prec > x.prec_) throw PrecisionError("truncate: target precision exceeds the element's precision");
    if (x.is_zero() || prec <= x.val_) return zero(prec);
    Digits d(x.d_.begin(), x.d_.begin() + (prec - x.val_));
    return from_digits(x.val_, d);
  }
  /// Extend precision by appending zero digits: the element is declared exact to prec.
  Elem pad(const Elem& x, int prec) const {
    if (prec <= x.prec_) return x;
    if (x.is_zero()) return zero(prec);
    Elem r = x;
    r.d_.resize(prec - x.val_, 0);
    r.prec_ = prec;
    return r;
  }
  /// x mod P^k as digits 0..k-1 (requires x integral and known to P^k).
  Digits residue_digits(const Elem& x, int k) const {
    Digits d(k, 0);
    for (int i = 0; i < k; ++i) d[i] = x.digit(i);
    return d;
  }
  /// Apply a residue map to every digit (Frobenius powers, embeddings).
  Elem map_digits(const Elem& x, const std::vector<uint32_t>& table, const LocalField& target) const {
    if (x.is_zero()) return target.zero(x.prec_);
    Digits d(x.d_.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = table[x.d_[i]];
    return target.from_digits(x.val_, d);
  }
  /// True iff x == y modulo P^k; both must be known to P^k.
  bool congruent(const Elem& x, const Elem& y, int k) const {
    if (x.prec_ < k || y.prec_ < k) throw PrecisionError("congruence modulo P^k needs precision k");
    const Elem d = sub(x, y);
    return d.is_zero() || d.val_ >= k;
  }

  int e() const { return spec_.equal_char() ? 1 : *spec_.e; }
  int witt_len(int R) const { return std::max(1, (R + e() - 1) / e()); }
  const GaloisRing& witt(int K) const {
    if (K <= static_cast<int>(witt_.size())) return *witt_[K - 1];
    std::lock_guard<std::mutex> lock(witt_mu_);
    while (static_cast<int>(extra_witt_.size()) < K) extra_witt_.push_back(nullptr);
    if (!extra_witt_[K - 1]) extra_witt_[K - 1] = std::make_shared<GaloisRing>(k_, K);
    return *extra_witt_[K - 1];
  }

 private:
  using Ring = std::vector<GaloisRing::Elem>;

  explicit LocalField(const FieldSpec& s) : spec_(s), k_(ResidueField::make(s.p, s.f)) {
    if (!s.equal_char()) {
      const int cap = std::max(1, (4 * s.N + 8 + *s.e - 1) / *s.e);
      for (int K = 1; K <= cap; ++K) {
        long m = 1;
        bool ok = true;
        for (int i = 0; i < K; ++i) {
          m *= s.p;
          if (m > (1L << 31)) ok = false;
        }
        if (!ok) break;
        witt_.push_back(std::make_shared<GaloisRing>(k_, K));
      }
    }
  }

  LocalFieldPtr self() const { return shared_from_this(); }
  void check(const Elem& x) const {
    if (x.F_.get() != this) throw ConfigError("operands belong to different fields");
  }

  Elem add_impl(const Elem& x, const Elem& y, bool subtract) const {
    check(x);
    check(y);
    const int prec = std::min(x.prec_, y.prec_);
    int v0 = prec;
    if (!x.is_zero()) v0 = std::min(v0, x.val_);
    if (!y.is_zero()) v0 = std::min(v0, y.val_);
    if (v0 >= prec) return zero(prec);
    const int R = prec - v0;
    Digits a(R, 0), b(R, 0);
    auto place = [&](const Elem& z, Digits& out) {
      if (z.is_zero()) return;
      for (int i = z.val_; i < prec; ++i) out[i - v0] = z.d_[i - z.val_];
    };
    place(x, a);
    place(y, b);
    if (subtract) b = neg_digits(b, R);
    Digits s = add_digits(a, b, R);
    return from_digits(v0, s);
  }

  // ---- digit-level kernels on unit parts of relative length R -------------

  Ring to_ring(const Digits& s, int R, const GaloisRing& W) const {
    const int E = e();
    Ring c(E, W.zero());
    int64_t ppow = 1;
    for (int j = 0; j < R; ++j) {
      if (j > 0 && j % E == 0) ppow *= p();
      if (s[j] == 0) continue;
      c[j % E] = W.add(c[j % E], W.mul_int(W.teich(s[j]), ppow));
    }
    return c;
  }
  Digits from_ring(Ring c, const GaloisRing& W, int R) const {
    const int E = e();
    Digits out(R, 0);
    for (int t = 0; t < R; ++t) {
      const uint32_t r = W.residue_of(c[0]);
      out[t] = r;
      if (r != 0) c[0] = W.sub(c[0], W.teich(r));
      const GaloisRing::Elem low = W.div_p(c[0]);
      for (int i = 0; i + 1 < E; ++i) c[i] = c[i + 1];
      c[E - 1] = low;
    }
    return out;
  }
  Elem from_ring_form(const Ring& c, const GaloisRing& W, int val, int R) const {
    return from_digits(val, from_ring(c, W, R));
  }
  Ring ring_mul(const Ring& a, const Ring& b, const GaloisRing& W) const {
    const int E = e();
    Ring t(2 * E - 1, W.zero());
    for (int i = 0; i < E; ++i) {
      if (W.is_zero(a[i])) continue;
      for (int j = 0; j < E; ++j) t[i + j] = W.add(t[i + j], W.mul(a[i], b[j]));
    }
    for (int k = 2 * E - 2; k >= E; --k) t[k - E] = W.add(t[k - E], W.mul_int(t[k], p()));
    t.resize(E);
    return t;
  }

  Digits add_digits(const Digits& a, const Digits& b, int R) const {
    if (equal_char()) {
      Digits s(R);
      for (int i = 0; i < R; ++i) s[i] = k_->add(a[i], b[i]);
      return s;
    }
    const auto& W = witt(witt_len(R));
    Ring c = to_ring(a, R, W);
    Ring d = to_ring(b, R, W);
    for (size_t i = 0; i < c.size(); ++i) c[i] = W.add(c[i], d[i]);
    return from_ring(c, W, R);
  }
  Digits neg_digits(const Digits& a, int R) const {
    if (equal_char()) {
      Digits s(R);
      for (int i = 0; i < R; ++i) s[i] = k_->neg(a[i]);
      return s;
    }
    const auto& W = witt(witt_len(R));
    Ring c = to_ring(a, R, W);
    for (auto& x : c) x = W.neg(x);
    return from_ring(c, W, R);
  }
  Digits mul_digits(const Digits& a, const Digits& b, int R) const {
    if (equal_char()) {
      Digits s(R, 0);
      for (int i = 0; i < R; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j < R; ++j) s[i + j] = k_->add(s[i + j], k_->mul(a[i], b[j]));
      }
      return s;
    }
    const auto& W = witt(witt_len(R));
    return from_ring(ring_mul(to_ring(a, R, W), to_ring(b, R, W), W), W, R);
  }
  Digits inv_digits(const Digits& a, int R) const {
    const uint32_t u0inv = k_->inv(a[0]);
    if (equal_char()) {
      Digits y(R, 0);
      y[0] = u0inv;
      for (int k = 1; k < R; ++k) {
        uint32_t s = 0;
        for (int i = 1; i <= k; ++i) s = k_->add(s, k_->mul(a[i], y[k - i]));
        y[k] = k_->neg(k_->mul(u0inv, s));
      }
      return y;
    }
    const auto& W = witt(witt_len(R));
    const Ring u = to_ring(a, R, W);
    Ring y(e(), W.zero());
    y[0] = W.teich(u0inv);
    Ring two(e(), W.zero());
    two[0] = W.from_int(2);
    for (int known = 1; known < R; known *= 2) {
      Ring uy = ring_mul(u, y, W);
      Ring corr(e(), W.zero());
      for (int i = 0; i < e(); ++i) corr[i] = W.sub(two[i], uy[i]);
      y = ring_mul(y, corr, W);
    }
    return from_ring(y, W, R);
  }

  FieldSpec spec_;
  ResidueFieldPtr k_;
  std::vector<std::shared_ptr<GaloisRing>> witt_;
  mutable std::mutex witt_mu_;
  mutable std::vector<std::shared_ptr<GaloisRing>> extra_witt_;
};

inline Elem Elem::operator+(const Elem& o) const { return F_->add(*this, o); }
inline Elem Elem::operator-(const Elem& o) const { return F_->sub(*this, o); }
inline Elem Elem::operator-() const { return F_->neg(*this); }
inline Elem Elem::operator*(const Elem& o) const { return F_->mul(*this, o); }

inline int valuation(const Elem& x) { return x.valuation(); }
inline Elem inv(const Elem& x) { return x.field()->inv(x); }

}  // namespace kclose
