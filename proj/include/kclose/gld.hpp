#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kclose/cyclic_algebra.hpp"

namespace kclose {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---- basic matrix operations over D --------------------------------------

inline DMatrix identity(const AlgebraPtr& A, int r, int prec) {
  DMatrix M(r, std::vector<DElem>(r, A->exact_zero()));
  for (int i = 0; i < r; ++i) M[i][i] = A->one(prec);
  return M;
}

/// diag(pi_D^{a_1}, ..., pi_D^{a_r}).
inline DMatrix diag_pi(const AlgebraPtr& A, const std::vector<int>& a, int prec) {
  const int r = static_cast<int>(a.size());
  DMatrix M(r, std::vector<DElem>(r, A->exact_zero()));
  for (int i = 0; i < r; ++i) M[i][i] = A->pi_power(a[i], prec);
  return M;
}

inline DMatrix dmul(const DMatrix& a, const DMatrix& b) {
  return mat_mul<DElem>(a, b, a[0][0].algebra()->exact_zero());
}

/// Minimum of the entry valuations (P_D units).
inline int mat_val(const DMatrix& M) {
  int v = kInfVal;
  for (const auto& row : M)
    for (const auto& x : row) v = std::min(v, x.valuation());
  return v;
}

inline int mat_precision(const DMatrix& M) {
  int p = kInfVal;
  for (const auto& row : M)
    for (const auto& x : row) p = std::min(p, x.precision());
  return p;
}

inline DMatrix mat_pad(const DMatrix& M, int prec) {
  DMatrix R = M;
  for (auto& row : R)
    for (auto& x : row) x = x.algebra()->pad(x, prec);
  return R;
}

inline DMatrix mat_truncate(const DMatrix& M, int prec) {
  DMatrix R = M;
  for (auto& row : R)
    for (auto& x : row) x = x.algebra()->truncate(x, prec);
  return R;
}

/// Inverse by Gauss-Jordan elimination with minimal-valuation pivots.
inline DMatrix mat_inv(const DMatrix& M) {
  const int r = static_cast<int>(M.size());
  const auto& A = M[0][0].algebra();
  DMatrix a = M;
  DMatrix b = identity(A, r, std::max(1, mat_precision(M) - 2 * std::min(0, mat_val(M)) + 1));
  for (int c = 0; c < r; ++c) {
    int best = -1, bv = kInfVal;
    for (int i = c; i < r; ++i) {
      const int v = a[i][c].valuation();
      if (v < bv) bv = v, best = i;
    }
    if (best < 0) throw PrecisionError("matrix is singular at the available precision");
    std::swap(a[c], a[best]);
    std::swap(b[c], b[best]);
    const DElem pinv = A->inv(a[c][c]);
    for (int j = 0; j < r; ++j) {
      a[c][j] = pinv * a[c][j];
      b[c][j] = pinv * b[c][j];
    }
    for (int i = 0; i < r; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      const DElem f = a[i][c];
      for (int j = 0; j < r; ++j) {
        a[i][j] = a[i][j] - f * a[c][j];
        b[i][j] = b[i][j] - f * b[c][j];
      }
    }
  }
  return b;
}

/// True iff M == N modulo P_D^k entrywise.
inline bool mat_congruent(const DMatrix& M, const DMatrix& N, int k) {
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) {
      const DElem diff = M[i][j] - N[i][j];
      if (diff.precision() < k) throw PrecisionError("congruence modulo P_D^k needs precision k");
      if (diff.valuation() < k) return false;
    }
  return true;
}

/// Reduction modulo P_D is invertible over k_E.
inline bool residue_invertible(const DMatrix& M) {
  const int r = static_cast<int>(M.size());
  const auto& kE = M[0][0].algebra()->E()->residue();
  std::vector<std::vector<uint32_t>> a(r, std::vector<uint32_t>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (M[i][j].valuation() < 0) return false;
      a[i][j] = M[i][j].digit(0);
    }
  for (int c = 0; c < r; ++c) {
    int p = -1;
    for (int i = c; i < r; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) return false;
    std::swap(a[c], a[p]);
    const uint32_t inv = kE.inv(a[c][c]);
    for (int i = c + 1; i < r; ++i) {
      const uint32_t f = kE.mul(a[i][c], inv);
      for (int j = c; j < r; ++j) a[i][j] = kE.sub(a[i][j], kE.mul(f, a[c][j]));
    }
  }
  return true;
}

// ---- Cartan decomposition -------------------------------------------------

struct CartanForm {
  std::vector<int> a;
  DMatrix k1;
  DMatrix k2;
};

/**
 * g = k1 diag(pi_D^{a_i}) k2 with k1, k2 in GL_r(O_D) and a nondecreasing.
 * Pivot rule: the entry of minimal valuation, smallest (row, column) first.
 */
inline CartanForm cartan(const DMatrix& g) {
  const int r = static_cast<int>(g.size());
  const auto& A = g[0][0].algebra();
  const int wp = std::max(1, mat_precision(g) - mat_val(g));
  DMatrix cur = g;
  DMatrix k1 = identity(A, r, wp), k2 = identity(A, r, wp);
  std::vector<int> a(r);
  for (int s = 0; s < r; ++s) {
    int bi = -1, bj = -1, bv = kInfVal;
    for (int i = s; i < r; ++i)
      for (int j = s; j < r; ++j) {
        const int v = cur[i][j].valuation();
        if (v < bv) bv = v, bi = i, bj = j;
      }
    if (bi < 0) throw PrecisionError("cartan: matrix is singular at the available precision");
    for (int i = s; i < r; ++i)
      for (int j = s; j < r; ++j)
        if (cur[i][j].is_zero() && cur[i][j].precision() < bv)
          throw PrecisionError("cartan: an entry known only to low precision could undercut the pivot");
    if (bi != s) {
      std::swap(cur[bi], cur[s]);
      for (int i = 0; i < r; ++i) std::swap(k1[i][bi], k1[i][s]);
    }
    if (bj != s) {
      for (int i = 0; i < r; ++i) std::swap(cur[i][bj], cur[i][s]);
      std::swap(k2[bj], k2[s]);
    }
    const DElem x = cur[s][s];
    const DElem xinv = A->inv(x);
    for (int i = s + 1; i < r; ++i) {
      if (cur[i][s].is_zero()) continue;
      const DElem c = cur[i][s] * xinv;
      for (int j = s; j < r; ++j) cur[i][j] = cur[i][j] - c * cur[s][j];
      cur[i][s] = A->zero(cur[i][s].precision());
      for (int t = 0; t < r; ++t) k1[t][s] = k1[t][s] + k1[t][i] * c;
    }
    for (int j = s + 1; j < r; ++j) {
      if (cur[s][j].is_zero()) continue;
      const DElem c = xinv * cur[s][j];
      for (int i = s; i < r; ++i) cur[i][j] = cur[i][j] - cur[i][s] * c;
      cur[s][j] = A->zero(cur[s][j].precision());
      for (int t = 0; t < r; ++t) k2[s][t] = k2[s][t] + c * k2[j][t];
    }
    const DElem u = A->left_shift(x, -bv);
    for (int t = 0; t < r; ++t) k2[s][t] = u * k2[s][t];
    cur[s][s] = A->pi_power(bv, x.precision());
    a[s] = bv;
  }
  return CartanForm{a, k1, k2};
}

// ---- canonical right cosets y K^l ------------------------------------------

/**
 * Column Hermite basis of the right O_D-lattice spanned by the columns of M:
 * lower triangular with diagonal pi_D^{c_i}. Returns the basis and the c_i.
 */
inline std::pair<DMatrix, std::vector<int>> column_hermite(DMatrix W) {
  const int r = static_cast<int>(W.size());
  const auto& A = W[0][0].algebra();
  std::vector<int> c(r);
  for (int i = 0; i < r; ++i) {
    int bj = -1, bv = kInfVal;
    for (int j = i; j < r; ++j) {
      const int v = W[i][j].valuation();
      if (v < bv) bv = v, bj = j;
    }
    if (bj < 0) throw PrecisionError("hermite: lattice is degenerate at the available precision");
    for (int j = i; j < r; ++j)
      if (W[i][j].is_zero() && W[i][j].precision() < bv)
        throw PrecisionError("hermite: an entry known only to low precision could undercut the pivot");
    if (bj != i)
      for (int k = 0; k < r; ++k) std::swap(W[k][i], W[k][bj]);
    const DElem x = W[i][i];
    const DElem xinv = A->inv(x);
    for (int j = i + 1; j < r; ++j) {
      if (W[i][j].is_zero()) continue;
      const DElem f = xinv * W[i][j];
      for (int k = i; k < r; ++k) W[k][j] = W[k][j] - W[k][i] * f;
      W[i][j] = A->zero(W[i][j].precision());
    }
    const DElem uinv = A->inv(A->left_shift(x, -bv));
    for (int k = i; k < r; ++k) W[k][i] = W[k][i] * uinv;
    W[i][i] = A->pi_power(bv, x.precision());
    c[i] = bv;
  }
  return {W, c};
}

/// Serialized canonical matrix: per entry its valuation and digits below the row bound.
using MatKey = std::vector<int32_t>;

struct CanonicalRight {
  DMatrix rep;
  MatKey key;
};

/**
 * Canonical representative of y K^l: every column is reduced modulo the
 * lattice y M_r(P_D^{ld}) so that row i keeps only digits below c_i.
 */
inline CanonicalRight canon_right(const DMatrix& y, int l, int prec) {
  const int r = static_cast<int>(y.size());
  const auto& A = y[0][0].algebra();
  const int ld = l * A->d();
  DMatrix yl = y;
  for (auto& row : yl)
    for (auto& x : row) x = A->left_shift(x, ld);
  auto [W, c] = column_hermite(yl);
  DMatrix v = y;
  for (int col = 0; col < r; ++col) {
    for (int i = 0; i < r; ++i) {
      const DElem& vi = v[i][col];
      if (vi.precision() < c[i]) throw PrecisionError("canonical coset form needs more precision");
      const DElem low = A->pad(A->truncate(vi, c[i]), vi.precision());
      const DElem tail = vi - low;
      v[i][col] = low;
      if (tail.is_zero()) continue;
      const DElem s = A->left_shift(tail, -c[i]);
      for (int k = i + 1; k < r; ++k) v[k][col] = v[k][col] - W[k][i] * s;
    }
  }
  MatKey key;
  for (int i = 0; i < r; ++i) key.push_back(c[i]);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const DElem& x = v[i][j];
      const int val = x.valuation();
      if (val >= c[i]) {
        key.push_back(INT32_MAX);
        v[i][j] = A->zero(prec);
        continue;
      }
      key.push_back(val);
      for (int t = val; t < c[i]; ++t) key.push_back(static_cast<int32_t>(x.digit(t)));
      v[i][j] = A->pad(x, prec);
    }
  return CanonicalRight{v, key};
}

// ---- volumes -------------------------------------------------------------

/// |GL_r(F_Q)|.
inline BigInt gl_order(long Q, int r) {
  BigInt n = 1, qr = 1;
  for (int i = 0; i < r; ++i) qr *= Q;
  BigInt qi = 1;
  for (int i = 0; i < r; ++i) {
    n *= (qr - qi);
    qi *= Q;
  }
  return n;
}

inline BigInt big_pow(long b, long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

/// vol(K^l) with vol(GL_r(O_D)) = 1.
inline Rational vol_Kl(long q, int d, int r, int l) {
  if (l < 0) throw ConfigError("level must be >= 0");
  if (l == 0) return Rational(1);
  const long Q = big_pow(q, d).convert_to<long>();
  const BigInt idx = gl_order(Q, r) * big_pow(Q, static_cast<long>(r) * r * (static_cast<long>(l) * d - 1));
  return Rational(BigInt(1), idx);
}

inline long spread_sum(const std::vector<int>& a) {
  long s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) s += std::abs(a[j] - a[i]);
  return s;
}

inline bool nondecreasing(const std::vector<int>& a) { return std::is_sorted(a.begin(), a.end()); }

/// Index [K^l : K^l cap A K^l A^{-1}] by the closed formula q^{d sum_{i<j}(a_j - a_i)}.
inline BigInt index_formula(long q, int d, const std::vector<int>& a) {
  if (!nondecreasing(a)) throw ConfigError("exponents must be nondecreasing");
  return big_pow(q, d * spread_sum(a));
}

/// vol(K^l A K^l) = q^{d sum_{i<j}(a_j - a_i)} vol(K^l).
inline Rational coset_volume(long q, int d, const std::vector<int>& a, int l) {
  return Rational(index_formula(q, d, a)) * vol_Kl(q, d, static_cast<int>(a.size()), l);
}

// ---- double coset keys -------------------------------------------------------

/**
 * Key of K^l B A C^{-1} K^l: level, exponents of A, and the residue
 * matrices B, C modulo P_D^{ld} as digit vectors (row-major, ld digits each).
 */
struct DoubleCosetKey {
  int l = 0;
  std::vector<int> a;
  std::vector<uint32_t> B;
  std::vector<uint32_t> C;

  friend bool operator==(const DoubleCosetKey& x, const DoubleCosetKey& y) {
    return x.l == y.l && x.a == y.a && x.B == y.B && x.C == y.C;
  }
  friend bool operator<(const DoubleCosetKey& x, const DoubleCosetKey& y) {
    return std::tie(x.l, x.a, x.B, x.C) < std::tie(y.l, y.a, y.B, y.C);
  }
};

/// Residue digits modulo P_D^k, row-major.
inline std::vector<uint32_t> residue_matrix_digits(const DMatrix& M, int k) {
  std::vector<uint32_t> out;
  for (const auto& row : M)
    for (const auto& x : row) {
      if (x.valuation() < 0) throw MathError("residue digits of a non-integral matrix");
      for (int t = 0; t < k; ++t) out.push_back(x.digit(t));
    }
  return out;
}

inline DMatrix matrix_from_digits(const AlgebraPtr& A, int r, const std::vector<uint32_t>& dg, int k, int prec) {
  DMatrix M(r, std::vector<DElem>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      std::vector<uint32_t> e(dg.begin() + (i * r + j) * k, dg.begin() + (i * r + j + 1) * k);
      M[i][j] = A->pad(A->from_digits(0, e), prec);
    }
  return M;
}

/**
 * GL_r(D) at level l: congruence subgroup K^l = 1 + M_r(P_D^{ld}), coset
 * enumeration and canonical double coset keys. Caches are internal; every
 * public operation is a function of its arguments.
 */
class LevelContext {
 public:
  struct KeyInfo {
    DoubleCosetKey key;
    DMatrix rep;
    std::vector<DMatrix> cosets;
  };

  LevelContext(AlgebraPtr A, int r, int l, int prec, long ceiling = 2000000)
      : A_(std::move(A)), r_(r), l_(l), prec_(prec), ceiling_(ceiling) {
    if (r < 1) throw ConfigError("rank r must be >= 1");
    if (l < 1) throw ConfigError("level l must be >= 1");
  }

  const AlgebraPtr& algebra() const { return A_; }
  int r() const { return r_; }
  int l() const { return l_; }
  int ld() const { return l_ * A_->d(); }
  int prec() const { return prec_; }
  long ceiling() const { return ceiling_; }
  long q() const { return A_->base()->q(); }
  Rational vol_Kl() const { return kclose::vol_Kl(q(), A_->d(), r_, l_); }

  DMatrix id() const { return identity(A_, r_, prec_); }
  DMatrix diag(const std::vector<int>& a) const { return diag_pi(A_, a, prec_); }
  CanonicalRight canon(const DMatrix& y) const { return canon_right(y, l_, prec_); }

  /// Right cosets n A K^l, n in K^l, of K^l A K^l, by breadth-first search (any exponent order).
  std::shared_ptr<const std::vector<CanonicalRight>> right_cosets_diag(const std::vector<int>& a) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = orbit_cache_.find(a);
      if (it != orbit_cache_.end()) return it->second;
    }
    const int f_E = A_->E()->residue().f();
    const int p = A_->base()->p();
    std::vector<DMatrix> gens;
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) {
        if (i == j || a[i] <= a[j]) continue;
        for (int t = ld(); t < ld() + a[i] - a[j]; ++t)
          for (int k = 0; k < f_E; ++k) {
            DMatrix g = id();
            g[i][j] = A_->teich(static_cast<uint32_t>(ipow(p, k)), t, prec_);
            gens.push_back(g);
          }
      }
    auto out = std::make_shared<std::vector<CanonicalRight>>();
    std::map<MatKey, size_t> seen;
    out->push_back(canon(diag(a)));
    seen.emplace(out->back().key, 0);
    for (size_t head = 0; head < out->size(); ++head) {
      for (const auto& g : gens) {
        CanonicalRight c = canon(dmul(g, (*out)[head].rep));
        if (seen.count(c.key)) continue;
        seen.emplace(c.key, out->size());
        out->push_back(std::move(c));
        if (static_cast<long>(out->size()) > ceiling_)
          throw CeilingExceeded("coset enumeration exceeded the ceiling of " + std::to_string(ceiling_));
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    orbit_cache_.emplace(a, out);
    return out;
  }

  /// Brute-force index [K^l : K^l cap A K^l A^{-1}].
  long index_oracle(const std::vector<int>& a) const {
    return static_cast<long>(right_cosets_diag(a)->size());
  }

  /// Canonical key of K^l g K^l; the id refers to the cached coset data.
  size_t key_id(const DMatrix& g) const {
    const CanonicalRight c0 = canon(g);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = form_to_key_.find(c0.key);
      if (it != form_to_key_.end()) return it->second;
    }
    const CartanForm cf = cartan(g);
    const auto orbit = right_cosets_diag(cf.a);
    const DMatrix k1 = mat_pad(cf.k1, prec_), k2 = mat_pad(cf.k2, prec_);
    std::vector<CanonicalRight> cos;
    cos.reserve(orbit->size());
    size_t best = 0;
    for (const auto& y : *orbit) {
      cos.push_back(canon(dmul(dmul(k1, y.rep), k2)));
      if (cos.back().key < cos[best].key) best = cos.size() - 1;
    }
    const CartanForm cs = cartan(cos[best].rep);
    DoubleCosetKey key;
    key.l = l_;
    key.a = cs.a;
    key.B = residue_matrix_digits(cs.k1, ld());
    key.C = residue_matrix_digits(mat_inv(cs.k2), ld());
    std::lock_guard<std::mutex> lock(mu_);
    auto kit = key_index_.find(key);
    size_t id;
    if (kit != key_index_.end()) {
      id = kit->second;
    } else {
      id = infos_.size();
      KeyInfo info{key, cos[best].rep, {}};
      for (auto& c : cos) info.cosets.push_back(c.rep);
      infos_.push_back(std::make_shared<KeyInfo>(std::move(info)));
      key_index_.emplace(key, id);
    }
    for (auto& c : cos) form_to_key_.emplace(c.key, id);
    return id;
  }

  DoubleCosetKey canonical_double_coset(const DMatrix& g) const { return info(key_id(g)).key; }

  const KeyInfo& info(size_t id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return *infos_.at(id);
  }
  size_t id_of(const DoubleCosetKey& k) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = key_index_.find(k);
      if (it != key_index_.end()) return it->second;
    }
    return key_id(representative(k));
  }
  /// B A C^{-1} for the key's residue data.
  DMatrix representative(const DoubleCosetKey& k) const {
    if (k.l != l_) throw ConfigError("key level differs from the context level");
    const DMatrix B = matrix_from_digits(A_, r_, k.B, ld(), prec_);
    const DMatrix C = matrix_from_digits(A_, r_, k.C, ld(), prec_);
    return dmul(dmul(B, diag(k.a)), mat_pad(mat_inv(C), prec_));
  }
  const std::vector<DMatrix>& right_cosets(const DoubleCosetKey& k) const { return info(id_of(k)).cosets; }

  /**
   * (B, C) in H_{l,A}: lifts with BA = AC exist. Entry (i,j) of C is the
   * class of pi^{-a_i} b_ij pi^{a_j}; digits of c_ij fed by unknown lift
   * digits of b_ij are unconstrained.
   */
  bool h_membership(const std::vector<int>& a, const DMatrix& B, const DMatrix& C) const {
    const int L = ld();
    const auto& kE = A_->E()->residue();
    const int fE = kE.f();
    const int f = A_->base()->residue().f();
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) {
        const int delta = a[i] - a[j];
        for (int t = 0; t < std::min(delta, L); ++t)
          if (B[i][j].digit(t) != 0) return false;
        for (int s = 0; s < L; ++s) {
          const int src = s + delta;
          if (src < 0) {
            if (C[i][j].digit(s) != 0) return false;
            continue;
          }
          if (src >= L) continue;
          // sigma^{a_j} on digits: sigma = Frob_q^h.
          const long e = static_cast<long>(A_->h()) * a[j] * f;
          const uint32_t want = kE.frob(B[i][j].digit(src), static_cast<int>(((e % fE) + fE) % fE));
          if (C[i][j].digit(s) != want) return false;
        }
      }
    return true;
  }

  size_t num_keys() const {
    std::lock_guard<std::mutex> lock(mu_);
    return infos_.size();
  }

 private:
  AlgebraPtr A_;
  int r_;
  int l_;
  int prec_;
  long ceiling_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int>, std::shared_ptr<const std::vector<CanonicalRight>>> orbit_cache_;
  mutable std::map<MatKey, size_t> form_to_key_;
  mutable std::map<DoubleCosetKey, size_t> key_index_;
  mutable std::vector<std::shared_ptr<KeyInfo>> infos_;
};

/// Enumerates GL_r(O_D / P_D^{ld}) as digit vectors (row-major, ld digits per entry).
inline std::vector<std::vector<uint32_t>> enumerate_K_mod_Kl(const AlgebraPtr& A, int r, int l, long ceiling) {
  const int L = l * A->d();
  const long Q = A->qE();
  const int cells = r * r * L;
  double total = 1;
  for (int i = 0; i < cells; ++i) total *= static_cast<double>(Q);
  if (total > static_cast<double>(ceiling) * 8) throw CeilingExceeded("K/K^l enumeration exceeds the ceiling");
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> dg(cells, 0);
  const auto& kE = A->E()->residue();
  while (true) {
    std::vector<std::vector<uint32_t>> res(r, std::vector<uint32_t>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) res[i][j] = dg[(i * r + j) * L];
    bool inv = true;
    for (int c = 0; c < r && inv; ++c) {
      int p = -1;
      for (int i = c; i < r; ++i)
        if (res[i][c] != 0) {
          p = i;
          break;
        }
      if (p < 0) {
        inv = false;
        break;
      }
      std::swap(res[c], res[p]);
      const uint32_t iv = kE.inv(res[c][c]);
      for (int i = c + 1; i < r; ++i) {
        const uint32_t f = kE.mul(res[i][c], iv);
        for (int j = c; j < r; ++j) res[i][j] = kE.sub(res[i][j], kE.mul(f, res[c][j]));
      }
    }
    if (inv) {
      out.push_back(dg);
      if (static_cast<long>(out.size()) > ceiling) throw CeilingExceeded("K/K^l enumeration exceeds the ceiling");
    }
    int k = 0;
    while (k < cells && ++dg[k] == Q) dg[k++] = 0;
    if (k == cells) break;
  }
  return out;
}

}  // namespace kclose
