#pragma once

#include <functional>
#include <vector>

#include "kclose/errors.hpp"

namespace kclose {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b, const T& zero) {
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  if (!a.empty() && a[0].size() != k) throw ConfigError("matrix dimensions do not match");
  Mat<T> c(n, std::vector<T>(m, zero));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t)
      for (size_t j = 0; j < m; ++j) c[i][j] = c[i][j] + a[i][t] * b[t][j];
  return c;
}

template <class T>
Mat<T> mat_add(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> c = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}

template <class T>
T mat_trace(const Mat<T>& a, const T& zero) {
  T s = zero;
  for (size_t i = 0; i < a.size(); ++i) s = s + a[i][i];
  return s;
}

/**
 * Characteristic polynomial det(X - A), lowest degree first, by the
 * division-free Samuelson-Berkowitz recursion (ring operations only).
 */
template <class T>
std::vector<T> charpoly(const Mat<T>& a, const T& zero, const T& one) {
  const size_t n = a.size();
  if (n == 0) return {one};
  // Coefficients highest degree first while recursing.
  std::function<std::vector<T>(size_t)> rec = [&](size_t s) -> std::vector<T> {
    const size_t k = n - s;
    if (k == 1) return {one, zero - a[s][s]};
    const std::vector<T> q = rec(s + 1);
    std::vector<T> col(k + 1, zero);
    col[0] = one;
    col[1] = zero - a[s][s];
    // v = A1^j C, starting from C.
    std::vector<T> v(k - 1, zero);
    for (size_t i = 0; i + 1 < k; ++i) v[i] = a[s + 1 + i][s];
    for (size_t j = 2; j <= k; ++j) {
      T rc = zero;
      for (size_t i = 0; i + 1 < k; ++i) rc = rc + a[s][s + 1 + i] * v[i];
      col[j] = zero - rc;
      if (j == k) break;
      std::vector<T> w(k - 1, zero);
      for (size_t i = 0; i + 1 < k; ++i)
        for (size_t t = 0; t + 1 < k; ++t) w[i] = w[i] + a[s + 1 + i][s + 1 + t] * v[t];
      v = std::move(w);
    }
    std::vector<T> out(k + 1, zero);
    for (size_t i = 0; i <= k; ++i)
      for (size_t j = 0; j < k && j <= i; ++j) out[i] = out[i] + col[i - j] * q[j];
    return out;
  };
  std::vector<T> hi = rec(0);
  return std::vector<T>(hi.rbegin(), hi.rend());
}

}  // namespace kclose
