#pragma once

#include <vector>

#include "kclose/local_field.hpp"

namespace kclose {

/// Dense polynomial, coefficient i multiplies X^i.
using Poly = std::vector<Elem>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  const auto& F = a[0].field();
  Poly c(a.size() + b.size() - 1);
  for (size_t k = 0; k < c.size(); ++k) c[k] = F->zero(kInfVal);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = c[i + j] + a[i] * b[j];
  return c;
}

inline Elem poly_eval(const Poly& a, const Elem& x) {
  Elem acc = x.field()->zero(kInfVal);
  for (size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
  return acc;
}

/// Remainder of a modulo the monic polynomial m.
inline Poly poly_rem_monic(Poly a, const Poly& m) {
  const size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const Elem c = a.back();
    const size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i < dm; ++i) a[shift + i] = a[shift + i] - c * m[i];
    a.pop_back();
  }
  return a;
}

/// X^n - 1 over F with coefficients known modulo P^prec.
inline Poly x_pow_minus_one(const LocalFieldPtr& F, long n, int prec) {
  Poly a(n + 1, F->zero(prec));
  a[0] = F->from_int(-1, prec);
  a[n] = F->one(prec);
  return a;
}

/// True iff every coefficient vanishes modulo P^k.
inline bool poly_zero_mod(const Poly& a, int k) {
  for (const auto& c : a) {
    if (c.precision() < k) throw PrecisionError("polynomial coefficient known below the requested modulus");
    if (!c.is_zero() && c.valuation() < k) return false;
  }
  return true;
}

}  // namespace kclose
