#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "kclose/extension.hpp"
#include "kclose/local_field.hpp"

namespace kclose {

/**
 * Two fields F, L with a ring isomorphism O_F/P_F^m -> O_L/P_L^m sending the
 * class of pi_F to that of pi_L. Both fields use Teichmuller digits over the
 * same residue field, so the isomorphism is the identity on digits.
 */
struct ProximityTriple {
  int m = 1;
  LocalFieldPtr source;
  LocalFieldPtr target;
};

/**
 * Checks that digit transport is additive modulo P^m: for every pair of
 * residues the expansions of teich(a) + teich(b) agree to m digits on both
 * sides. Products of Teichmuller digits are Teichmuller on both sides, so
 * this is exactly the ring isomorphism condition.
 */
inline bool digit_addition_agrees(const LocalField& F, const LocalField& L, int m) {
  const auto q = static_cast<uint32_t>(F.q());
  for (uint32_t a = 1; a < q; ++a)
    for (uint32_t b = a; b < q; ++b) {
      const Elem x = F.teich(a, 0, m) + F.teich(b, 0, m);
      const Elem y = L.teich(a, 0, m) + L.teich(b, 0, m);
      for (int i = 0; i < m; ++i)
        if (x.digit(i) != y.digit(i)) return false;
    }
  return true;
}

inline ProximityTriple make_proximity(const LocalFieldPtr& F, const LocalFieldPtr& L, int m) {
  if (m < 1) throw ConfigError("closeness level m must be >= 1");
  const auto& a = F->spec();
  const auto& b = L->spec();
  if (a.p != b.p || a.f != b.f) throw ConfigError("fields with different residue fields are never close");
  if (!digit_addition_agrees(*F, *L, m))
    throw ConfigError("fields are not " + std::to_string(m) + "-close: " + a.describe() + " vs " + b.describe());
  return ProximityTriple{m, F, L};
}

inline ProximityTriple make_proximity(const FieldSpec& F, const FieldSpec& L, int m) {
  return make_proximity(LocalField::make(F), LocalField::make(L), m);
}

inline ProximityTriple inverse(const ProximityTriple& t) { return ProximityTriple{t.m, t.target, t.source}; }

/// The triple between the degree-d unramified extensions of both sides.
inline ProximityTriple extension_triple(const ProximityTriple& t, int d) {
  return make_proximity(unramified_extension(t.source, d)->ext(), unramified_extension(t.target, d)->ext(), t.m);
}

/// Digit transport of x to the other field; the whole known expansion is carried.
inline Elem lambda_formal(const ProximityTriple& t, const Elem& x) {
  if (x.field() != t.source) throw ConfigError("lambda: element does not belong to the source field");
  if (x.is_zero()) return t.target->zero(x.precision());
  return t.target->from_digits(x.valuation(), x.digits());
}

/// lambda^m: defined on elements known to at most m digits beyond their valuation.
inline Elem lambda_apply(const ProximityTriple& t, const Elem& x) {
  if (!x.is_zero() && x.rel_precision() > t.m)
    throw PrecisionError("lambda: element carries more than m digits; truncate it first");
  return lambda_formal(t, x);
}

/// x truncated to m digits beyond its valuation, then transported.
inline Elem lambda_truncated(const ProximityTriple& t, const Elem& x) {
  if (x.is_zero()) return lambda_formal(t, x);
  const int keep = std::min(x.precision(), x.valuation() + t.m);
  return lambda_formal(t, x.field()->truncate(x, keep));
}

/**
 * a ~_l b: b - lambda(a) lies in P_L^{l + v(a)}. Two zeros are close; a zero
 * and a nonzero element are not.
 */
inline bool is_close(const Elem& a, const Elem& b, int l, const ProximityTriple& t) {
  if (l < 1 || l > t.m) throw ConfigError("closeness level l must satisfy 0 < l <= m");
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  const int v = a.valuation();
  if (a.precision() < v + l || b.precision() < v + l)
    throw PrecisionError("is_close: operands known below P^{l+v(a)}");
  const Elem diff = b - lambda_formal(t, a.field()->truncate(a, v + l));
  return diff.is_zero() || diff.valuation() >= v + l;
}

/// Componentwise closeness relative to the minimum valuation of a.
inline bool is_close(const std::vector<Elem>& a, const std::vector<Elem>& b, int l, const ProximityTriple& t) {
  if (l < 1 || l > t.m) throw ConfigError("closeness level l must satisfy 0 < l <= m");
  if (a.size() != b.size()) throw ConfigError("vectors of different lengths");
  int v = kInfVal;
  for (const auto& x : a)
    if (!x.is_zero()) v = std::min(v, x.valuation());
  if (v == kInfVal) {
    for (const auto& y : b)
      if (!y.is_zero()) return false;
    return true;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].precision() < v + l || b[i].precision() < v + l)
      throw PrecisionError("is_close: operands known below P^{l+v(a)}");
    const Elem diff = b[i] - lambda_formal(t, a[i].field()->truncate(a[i], v + l));
    if (!diff.is_zero() && diff.valuation() < v + l) return false;
  }
  return true;
}

}  // namespace kclose
