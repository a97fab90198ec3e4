#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "kclose/gld.hpp"

namespace kclose {

/// Finitely supported K^l-bi-invariant function: coefficients on double coset indicators.
struct HeckeElement {
  int l = 0;
  std::map<DoubleCosetKey, Rational> terms;

  /// Largest exponent spread a_r - a_1 present in the support (P_D units).
  int support_bound() const {
    int s = 0;
    for (const auto& [k, c] : terms)
      s = std::max(s, *std::max_element(k.a.begin(), k.a.end()) - *std::min_element(k.a.begin(), k.a.end()));
    return s;
  }
  friend bool operator==(const HeckeElement& x, const HeckeElement& y) { return x.l == y.l && x.terms == y.terms; }
  friend bool operator!=(const HeckeElement& x, const HeckeElement& y) { return !(x == y); }
};

inline HeckeElement hecke_add(const HeckeElement& x, const HeckeElement& y) {
  if (x.l != y.l) throw ConfigError("Hecke elements of different levels");
  HeckeElement z = x;
  for (const auto& [k, c] : y.terms) {
    z.terms[k] += c;
    if (z.terms[k] == 0) z.terms.erase(k);
  }
  return z;
}

inline HeckeElement hecke_scale(const HeckeElement& x, const Rational& s) {
  HeckeElement z{x.l, {}};
  if (s == 0) return z;
  for (const auto& [k, c] : x.terms) z.terms[k] = c * s;
  return z;
}

/// 1_{K^l g K^l}.
inline HeckeElement indicator(const LevelContext& ctx, const DMatrix& g) {
  HeckeElement f{ctx.l(), {}};
  f.terms[ctx.canonical_double_coset(g)] = 1;
  return f;
}

/// h(g) = vol(K^l)^{-1} 1_{K^l g K^l}.
inline HeckeElement h_fn(const LevelContext& ctx, const DMatrix& g) {
  HeckeElement f{ctx.l(), {}};
  f.terms[ctx.canonical_double_coset(g)] = 1 / ctx.vol_Kl();
  return f;
}

/// Precision in P_F units certifying g K^m g^{-1} in K^l for every g with exponent spread <= spread.
inline int kazhdan_bound(int l, int d, const std::vector<std::vector<int>>& support) {
  int s = 0;
  for (const auto& a : support)
    if (!a.empty()) s = std::max(s, *std::max_element(a.begin(), a.end()) - *std::min_element(a.begin(), a.end()));
  return l + ceil_div(s, d);
}

/// Bound needed by a convolution: products of the two supports have spread at most the sum.
inline int convolution_bound(const HeckeElement& f1, const HeckeElement& f2, int d) {
  return f1.l + ceil_div(f1.support_bound() + f2.support_bound(), d);
}

/**
 * 1_X * 1_Y for double cosets X = sum y_i K^l, Y = sum w_j K^l. Every y_i w_j
 * K^l lies in one double coset Z, and the value on Z is
 * vol(K^l) #{(i,j) : y_i w_j in Z} / #(right cosets in Z).
 */
inline HeckeElement convolve_basis(const LevelContext& ctx, const DoubleCosetKey& k1, const DoubleCosetKey& k2) {
  const auto& ys = ctx.right_cosets(k1);
  const auto& ws = ctx.right_cosets(k2);
  std::map<size_t, long> count;
  for (const auto& y : ys)
    for (const auto& w : ws) ++count[ctx.key_id(dmul(y, w))];
  HeckeElement out{ctx.l(), {}};
  const Rational vol = ctx.vol_Kl();
  for (const auto& [id, c] : count) {
    const auto& info = ctx.info(id);
    out.terms[info.key] = vol * Rational(c) / Rational(static_cast<long>(info.cosets.size()));
  }
  return out;
}

/**
 * Exact convolution. m is the working closeness/precision level in P_F
 * units; it must reach the Kazhdan bound of the combined support.
 */
inline HeckeElement convolve(const LevelContext& ctx, const HeckeElement& f1, const HeckeElement& f2, int m) {
  if (f1.l != ctx.l() || f2.l != ctx.l()) throw ConfigError("Hecke element level differs from the context");
  const int need = convolution_bound(f1, f2, ctx.algebra()->d());
  if (m < need)
    throw PrecisionError("convolution needs m >= " + std::to_string(need) + " (got " + std::to_string(m) + ")");
  HeckeElement out{ctx.l(), {}};
  for (const auto& [a, ca] : f1.terms)
    for (const auto& [b, cb] : f2.terms) out = hecke_add(out, hecke_scale(convolve_basis(ctx, a, b), ca * cb));
  return out;
}

/// Convolution with m set to the bound of the supports.
inline HeckeElement convolve(const LevelContext& ctx, const HeckeElement& f1, const HeckeElement& f2) {
  return convolve(ctx, f1, f2, convolution_bound(f1, f2, ctx.algebra()->d()));
}

/// Integral of f: sum of coefficient times volume of the double coset.
inline Rational hecke_integral(const LevelContext& ctx, const HeckeElement& f) {
  Rational s = 0;
  for (const auto& [k, c] : f.terms)
    s += c * ctx.vol_Kl() * Rational(static_cast<long>(ctx.right_cosets(k).size()));
  return s;
}

/// Exponents of A_i: i zeros then ones; A_{-1} = pi_D^{-1} Id.
inline std::vector<int> generator_exponents(int r, int i) {
  if (i == -1) return std::vector<int>(r, -1);
  std::vector<int> a(r, 1);
  for (int j = 0; j < i; ++j) a[j] = 0;
  return a;
}

/**
 * Factorization of a nondecreasing A into generators: A_0^{a_1} prod A_i^{a_{i+1}-a_i} A_r
 * if a_1 >= 0, A_{-1}^{-a_1} prod A_i^{a_{i+1}-a_i} otherwise. Returns generator indices.
 */
inline std::vector<int> factor_diagonal(const std::vector<int>& a) {
  if (!nondecreasing(a)) throw ConfigError("exponents must be nondecreasing");
  const int r = static_cast<int>(a.size());
  std::vector<int> out;
  if (a[0] >= 0) {
    for (int k = 0; k < a[0]; ++k) out.push_back(0);
  } else {
    for (int k = 0; k < -a[0]; ++k) out.push_back(-1);
  }
  for (int i = 1; i < r; ++i)
    for (int k = 0; k < a[i] - a[i - 1]; ++k) out.push_back(i);
  if (a[0] >= 0) out.push_back(r);
  return out;
}

struct GeneratorFamily {
  std::vector<HeckeElement> units;      ///< h(x), x over GL_r(O_D / P_D^{ld})
  std::vector<HeckeElement> diagonals;  ///< h(A_{-1}), h(A_0), ..., h(A_r)
};

inline GeneratorFamily generator_family(const LevelContext& ctx) {
  GeneratorFamily g;
  for (const auto& dg : enumerate_K_mod_Kl(ctx.algebra(), ctx.r(), ctx.l(), ctx.ceiling()))
    g.units.push_back(h_fn(ctx, matrix_from_digits(ctx.algebra(), ctx.r(), dg, ctx.ld(), ctx.prec())));
  for (int i = -1; i <= ctx.r(); ++i) g.diagonals.push_back(h_fn(ctx, ctx.diag(generator_exponents(ctx.r(), i))));
  return g;
}

}  // namespace kclose
