#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kclose/gld.hpp"

namespace kclose {

using Rng = std::mt19937_64;

/// Seed for sample i of a run, independent of how samples are scheduled.
inline uint64_t derive_seed(uint64_t seed, uint64_t i) {
  std::seed_seq sq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(i),
                   static_cast<uint32_t>(i >> 32)};
  uint64_t out[1];
  sq.generate(reinterpret_cast<uint32_t*>(out), reinterpret_cast<uint32_t*>(out) + 2);
  return out[0];
}

inline uint32_t random_residue(Rng& g, long q) { return static_cast<uint32_t>(g() % static_cast<uint64_t>(q)); }

/// Uniform element of P^val / P^prec.
inline Elem random_elem(Rng& g, const LocalField& F, int val, int prec) {
  std::vector<uint32_t> dg(std::max(0, prec - val));
  for (auto& x : dg) x = random_residue(g, F.q());
  return F.from_digits(val, dg);
}

/// Uniform element of P_D^val / P_D^prec.
inline DElem random_delem(Rng& g, const AlgebraPtr& A, int val, int prec) {
  std::vector<uint32_t> dg(std::max(0, prec - val));
  for (auto& x : dg) x = random_residue(g, A->qE());
  return A->from_digits(val, dg);
}

/// Random r x r matrix with entries in P_D^val / P_D^prec.
inline DMatrix random_dmatrix(Rng& g, const AlgebraPtr& A, int r, int val, int prec) {
  DMatrix M(r, std::vector<DElem>(r));
  for (auto& row : M)
    for (auto& x : row) x = random_delem(g, A, val, prec);
  return M;
}

/// Random element of K^l = 1 + M_r(P_D^{ld}).
inline DMatrix random_Kl(Rng& g, const AlgebraPtr& A, int r, int l, int prec) {
  DMatrix M = random_dmatrix(g, A, r, l * A->d(), prec);
  const DMatrix I = identity(A, r, prec);
  return mat_add(M, I);
}

/// Random element of GL_r(O_D) by rejection on the residue matrix.
inline DMatrix random_GL_O(Rng& g, const AlgebraPtr& A, int r, int prec) {
  while (true) {
    DMatrix M = random_dmatrix(g, A, r, 0, prec);
    if (residue_invertible(M)) return M;
  }
}

/// k1 diag(pi_D^{a}) k2 with random k1, k2 in GL_r(O_D).
inline DMatrix random_with_exponents(Rng& g, const AlgebraPtr& A, const std::vector<int>& a, int prec) {
  const int r = static_cast<int>(a.size());
  return dmul(dmul(random_GL_O(g, A, r, prec), diag_pi(A, a, prec)), random_GL_O(g, A, r, prec));
}

}  // namespace kclose
