#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kclose/errors.hpp"

namespace kclose {

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long i = 2; i * i <= n; ++i)
    if (n % i == 0) return false;
  return true;
}

inline long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

namespace detail {

// Dense polynomials over F_p, coefficient i is the coefficient of x^i.
using PolyFp = std::vector<int>;

inline void trim(PolyFp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2; e > 0; --e) r = r * a % p;
  return r;
}

inline PolyFp poly_mod(PolyFp a, const PolyFp& m, int p) {
  trim(a);
  PolyFp mm = m;
  trim(mm);
  const int lead_inv = inv_mod(mm.back(), p);
  while (a.size() >= mm.size()) {
    const int c = a.back() * lead_inv % p;
    const size_t shift = a.size() - mm.size();
    for (size_t i = 0; i < mm.size(); ++i) a[shift + i] = ((a[shift + i] - c * mm[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline PolyFp poly_mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& m, int p) {
  if (a.empty() || b.empty()) return {};
  PolyFp c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(c, m, p);
}

inline PolyFp poly_gcd(PolyFp a, PolyFp b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyFp r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) - x mod g has trivial gcd with g for all k <= deg/2.
inline bool irreducible(const PolyFp& g, int p) {
  const int n = static_cast<int>(g.size()) - 1;
  PolyFp xpow = poly_mod({0, 1}, g, p);
  for (int k = 1; 2 * k <= n; ++k) {
    PolyFp t = {1};
    PolyFp base = xpow;
    for (int e = p; e > 0; e >>= 1) {
      if (e & 1) t = poly_mulmod(t, base, g, p);
      base = poly_mulmod(base, base, g, p);
    }
    xpow = t;
    PolyFp diff = xpow;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] - 1 + p) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(g, diff, p).size() > 1) return false;
  }
  return true;
}

}  // namespace detail

/**
 * The finite field F_q, q = p^f, built as F_p[x]/(g) where g is the first
 * irreducible monic polynomial of degree f when candidates are ordered by the
 * integer sum_{i<f} c_i p^i of their non-leading coefficients.
 *
 * Elements are indices sum_i c_i p^i of their coordinate vectors in the basis
 * 1, x, ..., x^{f-1}. Index 0 is zero and index 1 is one.
 */
class ResidueField {
 public:
  static std::shared_ptr<const ResidueField> make(int p, int f) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const ResidueField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, f});
    if (it != cache.end()) return it->second;
    auto k = std::shared_ptr<const ResidueField>(new ResidueField(p, f));
    cache.emplace(std::make_pair(p, f), k);
    return k;
  }

  int p() const { return p_; }
  int f() const { return f_; }
  uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }
  uint32_t primitive() const { return exp_[1]; }

  uint32_t add(uint32_t a, uint32_t b) const { return add_[a * q_ + b]; }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add_[a * q_ + neg_[b]]; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  uint32_t inv(uint32_t a) const {
    if (a == 0) throw MathError("residue field: inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  uint32_t pow(uint32_t a, long e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    const long n = q_ - 1;
    long s = (static_cast<long>(log_[a]) * (e % n)) % n;
    if (s < 0) s += n;
    return exp_[s];
  }
  /// Discrete logarithm to the base primitive(); a must be nonzero.
  uint32_t log(uint32_t a) const { return log_[a]; }
  uint32_t exp(long k) const {
    const long n = q_ - 1;
    return exp_[((k % n) + n) % n];
  }
  /// a -> a^(p^k), k taken modulo f.
  uint32_t frob(uint32_t a, int k = 1) const {
    k %= f_;
    if (k < 0) k += f_;
    return frob_[k][a];
  }
  /// Absolute trace to F_p, returned as an integer in [0, p).
  int trace(uint32_t a) const { return trace_[a]; }

  std::vector<int> coords(uint32_t a) const {
    std::vector<int> c(f_);
    for (int i = 0; i < f_; ++i) {
      c[i] = static_cast<int>(a % p_);
      a /= p_;
    }
    return c;
  }
  uint32_t from_coords(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != f_) throw ConfigError("residue coordinates must have length f");
    uint32_t a = 0;
    for (int i = f_ - 1; i >= 0; --i) {
      if (c[i] < 0 || c[i] >= p_) throw ConfigError("residue coordinate out of range");
      a = a * p_ + c[i];
    }
    return a;
  }
  /// The residue of an integer.
  uint32_t from_int(long n) const { return static_cast<uint32_t>(((n % p_) + p_) % p_); }

 private:
  ResidueField(int p, int f) : p_(p), f_(f) {
    if (!is_prime(p)) throw ConfigError("p must be prime, got " + std::to_string(p));
    if (f < 1) throw ConfigError("residue degree f must be >= 1");
    const long q = ipow(p, f);
    if (q > 1024) throw ConfigError("residue field too large (q > 1024)");
    q_ = static_cast<uint32_t>(q);
    for (long idx = 0; idx < ipow(p, f); ++idx) {
      detail::PolyFp g(f + 1);
      long t = idx;
      for (int i = 0; i < f; ++i) {
        g[i] = static_cast<int>(t % p);
        t /= p;
      }
      g[f] = 1;
      if (detail::irreducible(g, p)) {
        modulus_ = g;
        break;
      }
    }
    auto to_poly = [&](uint32_t a) {
      detail::PolyFp v = coords(a);
      detail::trim(v);
      return v;
    };
    auto from_poly = [&](detail::PolyFp v) {
      v.resize(f_, 0);
      return from_coords(v);
    };
    add_.assign(static_cast<size_t>(q_) * q_, 0);
    neg_.assign(q_, 0);
    for (uint32_t a = 0; a < q_; ++a) {
      const auto ca = coords(a);
      std::vector<int> n(f_);
      for (int i = 0; i < f_; ++i) n[i] = (p_ - ca[i]) % p_;
      neg_[a] = from_coords(n);
      for (uint32_t b = 0; b < q_; ++b) {
        const auto cb = coords(b);
        std::vector<int> s(f_);
        for (int i = 0; i < f_; ++i) s[i] = (ca[i] + cb[i]) % p_;
        add_[a * q_ + b] = from_coords(s);
      }
    }
    // Multiplicative structure through a primitive element.
    std::vector<uint32_t> mul_by(q_);
    exp_.assign(q_, 0);
    log_.assign(q_, 0);
    for (uint32_t g = 1; g < q_; ++g) {
      std::vector<uint32_t> powers;
      uint32_t x = 1;
      bool ok = true;
      for (uint32_t k = 0; k + 1 < q_; ++k) {
        if (k > 0 && x == 1) {
          ok = false;
          break;
        }
        powers.push_back(x);
        x = from_poly(detail::poly_mulmod(to_poly(x), to_poly(g), modulus_, p_));
      }
      if (ok && x == 1) {
        for (uint32_t k = 0; k + 1 < q_; ++k) {
          exp_[k] = powers[k];
          log_[powers[k]] = k;
        }
        exp_[q_ - 1] = 1;
        break;
      }
    }
    if (q_ == 2) {
      exp_[0] = 1;
      exp_[1] = 1;
      log_[1] = 0;
    }
    frob_.assign(f_, std::vector<uint32_t>(q_));
    for (int k = 0; k < f_; ++k)
      for (uint32_t a = 0; a < q_; ++a) frob_[k][a] = pow(a, ipow(p_, k));
    trace_.assign(q_, 0);
    for (uint32_t a = 0; a < q_; ++a) {
      uint32_t s = 0;
      for (int k = 0; k < f_; ++k) s = add(s, frob_[k][a]);
      trace_[a] = static_cast<int>(s);
    }
  }

  int p_;
  int f_;
  uint32_t q_ = 0;
  std::vector<int> modulus_;
  std::vector<uint32_t> add_;
  std::vector<uint32_t> neg_;
  std::vector<uint32_t> exp_;
  std::vector<uint32_t> log_;
  std::vector<std::vector<uint32_t>> frob_;
  std::vector<int> trace_;
};

using ResidueFieldPtr = std::shared_ptr<const ResidueField>;

/// The embedding F_{p^f} -> F_{p^{fd}} sending x to the smallest-index root of the small modulus.
inline std::vector<uint32_t> residue_embedding(const ResidueField& small, const ResidueField& big) {
  if (small.p() != big.p() || big.f() % small.f() != 0) throw ConfigError("residue fields do not embed");
  const auto& g = small.modulus();
  uint32_t root = 0;
  bool found = false;
  for (uint32_t x = 0; x < big.q() && !found; ++x) {
    uint32_t v = 0;
    for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i) v = big.add(big.mul(v, x), big.from_int(g[i]));
    if (v == 0) {
      root = x;
      found = true;
    }
  }
  if (!found) throw MathError("no root of the residue modulus in the extension");
  std::vector<uint32_t> map(small.q());
  for (uint32_t a = 0; a < small.q(); ++a) {
    const auto c = small.coords(a);
    uint32_t v = 0;
    for (int i = small.f() - 1; i >= 0; --i) v = big.add(big.mul(v, root), big.from_int(c[i]));
    map[a] = v;
  }
  return map;
}

}  // namespace kclose
