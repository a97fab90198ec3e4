#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "kclose/extension.hpp"
#include "kclose/local_field.hpp"
#include "kclose/matrix.hpp"
#include "kclose/polynomial.hpp"

namespace kclose {

class CyclicAlgebra;
using AlgebraPtr = std::shared_ptr<const CyclicAlgebra>;

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }

/**
 * x = sum_{i<d} pi_D^i e_i with e_i in E. A component may be an E-zero known
 * to some precision; the P_D-adic precision of x is min_i (i + d prec(e_i)).
 */
class DElem {
 public:
  DElem() = default;
  DElem(AlgebraPtr A, std::vector<Elem> c) : A_(std::move(A)), c_(std::move(c)) {}

  const AlgebraPtr& algebra() const { return A_; }
  const std::vector<Elem>& components() const { return c_; }
  const Elem& component(int i) const { return c_[i]; }
  int d() const { return static_cast<int>(c_.size()); }

  int valuation() const {
    int v = kInfVal;
    for (int i = 0; i < d(); ++i)
      if (!c_[i].is_zero()) v = std::min(v, d() * c_[i].valuation() + i);
    return v;
  }
  int precision() const {
    long p = kInfVal;
    for (int i = 0; i < d(); ++i) p = std::min<long>(p, i + static_cast<long>(d()) * c_[i].precision());
    return static_cast<int>(std::min<long>(p, kInfVal));
  }
  bool is_zero() const { return valuation() == kInfVal; }
  bool is_unit() const { return valuation() == 0; }
  /// P_D-adic Teichmuller digit at pi_D^t (in k_E).
  uint32_t digit(int t) const {
    const int i = ((t % d()) + d()) % d();
    return c_[i].digit(floor_div(t - i, d()));
  }

  friend bool operator==(const DElem& a, const DElem& b) { return a.c_ == b.c_; }
  friend bool operator!=(const DElem& a, const DElem& b) { return !(a == b); }

  inline DElem operator+(const DElem& o) const;
  inline DElem operator-(const DElem& o) const;
  inline DElem operator-() const;
  inline DElem operator*(const DElem& o) const;

 private:
  AlgebraPtr A_;
  std::vector<Elem> c_;
};

/**
 * The cyclic algebra D = (+)_{i<d} pi_D^i E with pi_D^d = pi_F and
 * pi_D^{-1} e pi_D = sigma(e), sigma = Frob^h. A division algebra when
 * gcd(h, d) = 1.
 */
class CyclicAlgebra : public std::enable_shared_from_this<CyclicAlgebra> {
 public:
  static AlgebraPtr make(const LocalFieldPtr& F, int d, int h) {
    if (d < 1) throw ConfigError("algebra degree d must be >= 1");
    if (std::gcd(h, d) != 1) throw ConfigError("gcd(h, d) must be 1 for a division algebra");
    return AlgebraPtr(new CyclicAlgebra(F, d, h));
  }

  const LocalFieldPtr& base() const { return F_; }
  const LocalFieldPtr& E() const { return ext_->ext(); }
  const ExtensionPtr& ext() const { return ext_; }
  int d() const { return d_; }
  int h() const { return h_; }
  long qE() const { return E()->q(); }

  /// sigma^j(e).
  Elem sigma(const Elem& e, long j) const { return ext_->frobenius_power(e, static_cast<long>(h_) * j); }

  // ---- constructors (precision in P_D units) ------------------------------

  DElem zero(int prec) const {
    std::vector<Elem> c;
    for (int i = 0; i < d_; ++i) c.push_back(E()->zero(ceil_div(prec - i, d_)));
    return DElem(self(), c);
  }
  DElem exact_zero() const { return zero(kInfVal / 2); }
  /// pi_D^i e, with e in E.
  DElem from_E(const Elem& e, int i = 0) const {
    const int r = ((i % d_) + d_) % d_;
    const int s = floor_div(i - r, d_);
    std::vector<Elem> c;
    const int prec = e.precision() == kInfVal ? kInfVal / 2 : e.precision() * d_ + i;
    for (int k = 0; k < d_; ++k)
      c.push_back(k == r ? E()->shift(e, s) : E()->zero(ceil_div(prec - k, d_)));
    return DElem(self(), c);
  }
  DElem from_F(const Elem& x) const { return from_E(ext_->embed(x)); }
  DElem teich(uint32_t a, int val, int prec) const {
    const int r = ((val % d_) + d_) % d_;
    return from_E(E()->teich(a, floor_div(val - r, d_), std::max(1, ceil_div(prec - val, d_))), r);
  }
  DElem one(int prec) const { return teich(1, 0, prec); }
  DElem pi_power(int k, int prec) const { return teich(1, k, prec); }
  /// Element with P_D-adic digits starting at pi_D^val.
  DElem from_digits(int val, const std::vector<uint32_t>& digits) const {
    const int prec = val + static_cast<int>(digits.size());
    std::vector<Elem> c;
    for (int i = 0; i < d_; ++i) {
      const int lo = ceil_div(val - i, d_), hi = ceil_div(prec - i, d_);
      Digits dg;
      for (int k = lo; k < hi; ++k) dg.push_back(digits[k * d_ + i - val]);
      c.push_back(E()->from_digits(lo, dg));
    }
    return DElem(self(), c);
  }

  // ---- arithmetic ---------------------------------------------------------

  DElem add(const DElem& x, const DElem& y) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) c[i] = x.component(i) + y.component(i);
    return DElem(self(), c);
  }
  DElem sub(const DElem& x, const DElem& y) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) c[i] = x.component(i) - y.component(i);
    return DElem(self(), c);
  }
  DElem neg(const DElem& x) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) c[i] = -x.component(i);
    return DElem(self(), c);
  }
  /// (pi^i a)(pi^j b) = pi^{i+j} sigma^j(a) b, with pi^d = pi_F.
  DElem mul(const DElem& x, const DElem& y) const {
    std::vector<Elem> c(d_, E()->zero(kInfVal / 2));
    for (int i = 0; i < d_; ++i) {
      const Elem& a = x.component(i);
      for (int j = 0; j < d_; ++j) {
        const Elem& b = y.component(j);
        Elem t = (a.is_zero() ? a : sigma(a, j)) * b;
        if (i + j >= d_) t = E()->shift(t, 1);
        c[(i + j) % d_] = c[(i + j) % d_] + t;
      }
    }
    return DElem(self(), c);
  }
  /// pi_D^k x.
  DElem left_shift(const DElem& x, int k) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) {
      const int t = i + k;
      const int r = ((t % d_) + d_) % d_;
      c[r] = E()->shift(x.component(i), floor_div(t - r, d_));
    }
    return DElem(self(), c);
  }
  /// x pi_D^k.
  DElem right_shift(const DElem& x, int k) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) {
      const int t = i + k;
      const int r = ((t % d_) + d_) % d_;
      const Elem& e = x.component(i);
      c[r] = E()->shift(e.is_zero() ? e : sigma(e, k), floor_div(t - r, d_));
    }
    return DElem(self(), c);
  }
  DElem inv(const DElem& x) const {
    const int v = x.valuation();
    if (v == kInfVal) throw MathError("inversion of zero in D");
    const DElem u = left_shift(x, -v);
    const int R = u.precision();
    if (R < 1) throw PrecisionError("D inverse: no significant digits");
    const uint32_t u0 = u.component(0).digit(0);
    DElem y = teich(E()->residue().inv(u0), 0, R);
    const DElem two = add(one(R), one(R));
    for (int known = 1; known < R; known *= 2) y = mul(y, sub(two, mul(u, y)));
    y = mul(y, sub(two, mul(u, y)));
    y = truncate(y, R);
    return right_shift(y, -v);
  }
  /// Forget P_D-adic digits at and beyond prec.
  DElem truncate(const DElem& x, int prec) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) {
      const int k = ceil_div(prec - i, d_);
      const Elem& e = x.component(i);
      c[i] = k >= e.precision() ? e : E()->truncate(e, k);
    }
    return DElem(self(), c);
  }
  /// Declare x exact up to P_D^prec (append zero digits).
  DElem pad(const DElem& x, int prec) const {
    std::vector<Elem> c(d_);
    for (int i = 0; i < d_; ++i) c[i] = E()->pad(x.component(i), ceil_div(prec - i, d_));
    return DElem(self(), c);
  }

  /// trd(x) = sum_i sigma^i(e_0), an element of F.
  Elem reduced_trace(const DElem& x) const {
    const Elem& e0 = x.component(0);
    Elem s = E()->zero(e0.precision());
    for (int i = 0; i < d_; ++i) s = s + sigma(e0, i);
    return ext_->restrict_to_base(s);
  }

 private:
  CyclicAlgebra(LocalFieldPtr F, int d, int h)
      : F_(std::move(F)), ext_(unramified_extension(F_, d)), d_(d), h_(((h % d) + d) % d) {}
  AlgebraPtr self() const { return shared_from_this(); }

  LocalFieldPtr F_;
  ExtensionPtr ext_;
  int d_;
  int h_;
};

inline DElem DElem::operator+(const DElem& o) const { return A_->add(*this, o); }
inline DElem DElem::operator-(const DElem& o) const { return A_->sub(*this, o); }
inline DElem DElem::operator-() const { return A_->neg(*this); }
inline DElem DElem::operator*(const DElem& o) const { return A_->mul(*this, o); }

inline AlgebraPtr make_algebra(const LocalFieldPtr& F, int d, int h) { return CyclicAlgebra::make(F, d, h); }
inline DElem alg_mul(const DElem& x, const DElem& y) { return x * y; }
inline DElem alg_inv(const DElem& x) { return x.algebra()->inv(x); }
inline Elem reduced_trace(const DElem& x) { return x.algebra()->reduced_trace(x); }

using DMatrix = Mat<DElem>;
using EMatrix = Mat<Elem>;

/**
 * The splitting embedding M_r(D) -> M_{rd}(E): block (s,t) is the matrix of
 * left multiplication by M_st on D viewed as a right E-space with basis
 * 1, pi_D, ..., pi_D^{d-1}.
 */
inline EMatrix psi_embed(const DMatrix& M) {
  const size_t r = M.size();
  if (r == 0) return {};
  const auto& A = *M[0][0].algebra();
  const int d = A.d();
  const auto& E = A.E();
  const size_t n = r * d;
  EMatrix X(n, std::vector<Elem>(n, E->zero(kInfVal / 2)));
  for (size_t s = 0; s < r; ++s)
    for (size_t t = 0; t < r; ++t)
      for (int k = 0; k < d; ++k) {
        const Elem& e = M[s][t].component(k);
        for (int j = 0; j < d; ++j) {
          const Elem se = e.is_zero() ? e : A.sigma(e, j);
          if (k + j < d)
            X[s * d + k + j][t * d + j] = se;
          else
            X[s * d + k + j - d][t * d + j] = E->shift(se, 1);
        }
      }
  return X;
}

/// Reduced characteristic polynomial (lowest degree first), coefficients in F.
inline Poly reduced_charpoly(const DMatrix& M) {
  if (M.empty()) throw ConfigError("empty matrix");
  const auto& A = *M[0][0].algebra();
  const auto& E = A.E();
  const EMatrix X = psi_embed(M);
  int hi = 1, lo = 0;
  for (const auto& row : X)
    for (const auto& x : row) {
      if (x.precision() < kInfVal / 4) hi = std::max(hi, x.precision());
      if (!x.is_zero()) lo = std::min(lo, x.valuation());
    }
  const int n = static_cast<int>(X.size());
  const auto cp = charpoly<Elem>(X, E->zero(kInfVal / 2), E->one(hi - n * lo + 1));
  Poly out;
  for (const auto& c : cp) out.push_back(A.ext()->restrict_to_base(c));
  return out;
}

/// Reduced norm of a square matrix over D: (-1)^n times the constant coefficient.
inline Elem reduced_norm(const DMatrix& M) {
  const Poly cp = reduced_charpoly(M);
  return (cp.size() - 1) % 2 == 0 ? cp[0] : -cp[0];
}

}  // namespace kclose
