#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "kclose/closeness.hpp"
#include "kclose/hecke.hpp"

namespace kclose {

/**
 * Transfer between the level-l Hecke algebras of GL_r(D_F) and GL_r(D_L) for
 * m-close F and L. Both algebras are built from (d, h) over their base field;
 * residue matrices are identified digit by digit.
 */
class TransferContext {
 public:
  TransferContext(ProximityTriple t, int d, int h, int r, int l, int prec, long ceiling = 2000000)
      : t_(std::move(t)),
        AF_(make_algebra(t_.source, d, h)),
        AL_(make_algebra(t_.target, d, h)),
        F_(AF_, r, l, prec, ceiling),
        L_(AL_, r, l, prec, ceiling) {
    if (l > t_.m) throw ConfigError("transfer level l exceeds the closeness level m");
  }

  const ProximityTriple& triple() const { return t_; }
  const LevelContext& source() const { return F_; }
  const LevelContext& target() const { return L_; }
  int m() const { return t_.m; }
  int l() const { return F_.l(); }

  DoubleCosetKey transfer_basis(const DoubleCosetKey& k) const { return move_key(k, F_, L_); }
  DoubleCosetKey inverse_basis(const DoubleCosetKey& k) const { return move_key(k, L_, F_); }

  HeckeElement transfer_hecke(const HeckeElement& f) const {
    HeckeElement out{f.l, {}};
    for (const auto& [k, c] : f.terms) out.terms[transfer_basis(k)] += c;
    return out;
  }

 private:
  static DoubleCosetKey move_key(const DoubleCosetKey& k, const LevelContext& from, const LevelContext& to) {
    (void)from;
    const auto& A = to.algebra();
    const DMatrix B = matrix_from_digits(A, to.r(), k.B, to.ld(), to.prec());
    const DMatrix C = matrix_from_digits(A, to.r(), k.C, to.ld(), to.prec());
    const DMatrix g = dmul(dmul(B, to.diag(k.a)), mat_pad(mat_inv(C), to.prec()));
    return to.canonical_double_coset(g);
  }

  ProximityTriple t_;
  AlgebraPtr AF_;
  AlgebraPtr AL_;
  LevelContext F_;
  LevelContext L_;
};

/// All nondecreasing exponent tuples with entries in [lo, hi].
inline std::vector<std::vector<int>> sorted_tuples(int r, int lo, int hi) {
  std::vector<std::vector<int>> out;
  if (lo > hi) return out;
  std::vector<int> a(r, lo);
  while (true) {
    if (nondecreasing(a)) out.push_back(a);
    int k = r - 1;
    while (k >= 0 && ++a[k] > hi) a[k--] = lo;
    if (k < 0) break;
  }
  return out;
}

/// Every double coset key K^l B A C^{-1} K^l with A over the given exponent tuples.
inline std::vector<DoubleCosetKey> basis_keys(const LevelContext& ctx, const std::vector<std::vector<int>>& tuples) {
  const auto reps = enumerate_K_mod_Kl(ctx.algebra(), ctx.r(), ctx.l(), ctx.ceiling());
  std::vector<DMatrix> mats, invs;
  for (const auto& dg : reps) {
    mats.push_back(matrix_from_digits(ctx.algebra(), ctx.r(), dg, ctx.ld(), ctx.prec()));
    invs.push_back(mat_pad(mat_inv(mats.back()), ctx.prec()));
  }
  std::set<DoubleCosetKey> keys;
  for (const auto& a : tuples) {
    const DMatrix A = ctx.diag(a);
    for (const auto& B : mats) {
      const DMatrix BA = dmul(B, A);
      for (const auto& Ci : invs) keys.insert(ctx.canonical_double_coset(dmul(BA, Ci)));
    }
  }
  return std::vector<DoubleCosetKey>(keys.begin(), keys.end());
}

struct TransferFailure {
  std::string kind;
  DoubleCosetKey k1;
  DoubleCosetKey k2;
};

struct TransferReport {
  std::string params;
  long keys = 0;
  long pairs_checked = 0;
  long volumes_checked = 0;
  int required_m = 0;
  bool diagnostic = false;
  std::vector<TransferFailure> failures;
  double elapsed = 0;
  bool passed() const { return failures.empty(); }
};

/**
 * Checks zeta(f1 * f2) = zeta(f1) * zeta(f2) on every pair of basis
 * indicators with exponents in [lo, hi], and vol(W_F) = vol(W_L) on every key.
 * Below the Kazhdan bound the run is only allowed in diagnostic mode.
 */
inline TransferReport verify_transfer_hom(const TransferContext& ctx, int lo, int hi, bool diagnostic = false) {
  const auto t0 = std::chrono::steady_clock::now();
  TransferReport rep;
  const auto& F = ctx.source();
  const auto& L = ctx.target();
  const int d = F.algebra()->d();
  rep.required_m = F.l() + ceil_div(2 * (hi - lo), d);
  rep.diagnostic = ctx.m() < rep.required_m;
  if (rep.diagnostic && !diagnostic)
    throw ConfigError("closeness level m=" + std::to_string(ctx.m()) + " is below the Kazhdan bound " +
                      std::to_string(rep.required_m));
  rep.params = F.algebra()->base()->spec().describe() + " -> " + L.algebra()->base()->spec().describe() +
               " r=" + std::to_string(F.r()) + " d=" + std::to_string(d) + " l=" + std::to_string(F.l()) +
               " m=" + std::to_string(ctx.m()) + " exponents=[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  const auto keys = basis_keys(F, sorted_tuples(F.r(), lo, hi));
  rep.keys = static_cast<long>(keys.size());
  std::vector<DoubleCosetKey> moved;
  for (const auto& k : keys) {
    moved.push_back(ctx.transfer_basis(k));
    if (ctx.inverse_basis(moved.back()) != k) rep.failures.push_back({"roundtrip", k, k});
    const Rational vF = F.vol_Kl() * Rational(static_cast<long>(F.right_cosets(k).size()));
    const Rational vL = L.vol_Kl() * Rational(static_cast<long>(L.right_cosets(moved.back()).size()));
    ++rep.volumes_checked;
    if (vF != vL) rep.failures.push_back({"volume", k, k});
  }
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = 0; j < keys.size(); ++j) {
      const HeckeElement lhs = ctx.transfer_hecke(convolve_basis(F, keys[i], keys[j]));
      const HeckeElement rhs = convolve_basis(L, moved[i], moved[j]);
      ++rep.pairs_checked;
      if (lhs != rhs) rep.failures.push_back({"product", keys[i], keys[j]});
    }
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace kclose
