#pragma once

#include <gtest/gtest.h>

#include "kclose/kclose.hpp"

namespace kclose::testing {

inline LocalFieldPtr fq_t(int p, int N, int f = 1) { return LocalField::make(make_local_field(p, p, f, {}, N)); }
inline LocalFieldPtr char0(int p, int e, int N, int f = 1) { return LocalField::make(make_local_field(0, p, f, e, N)); }

/// x and y agree modulo P^k (both known to at least k digits).
inline ::testing::AssertionResult congruent(const Elem& x, const Elem& y, int k) {
  if (x.field()->congruent(x, y, k)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "elements differ modulo P^" << k << " (valuations " << x.valuation()
                                       << ", " << y.valuation() << ")";
}

inline bool delem_congruent(const DElem& x, const DElem& y, int k) {
  const DElem diff = x - y;
  return diff.is_zero() || diff.valuation() >= k;
}

inline std::vector<uint32_t> residue_digits(const Elem& x, int k) {
  std::vector<uint32_t> out(k);
  for (int i = 0; i < k; ++i) out[i] = x.digit(i);
  return out;
}

/// Every element of O/P^m as digit vectors, in lexicographic order.
inline std::vector<std::vector<uint32_t>> all_digit_vectors(long q, int m) {
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> dg(m, 0);
  while (true) {
    out.push_back(dg);
    int k = 0;
    while (k < m && ++dg[k] == q) dg[k++] = 0;
    if (k == m) break;
  }
  return out;
}

}  // namespace kclose::testing
