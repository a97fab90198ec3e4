#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "kclose/closeness.hpp"
#include "kclose/gld.hpp"
#include "kclose/int_poly.hpp"
#include "kclose/sampling.hpp"

namespace kclose {

// ---- GL_n(F) as the degree-1 case of GL_r(D) ------------------------------

inline AlgebraPtr matrix_algebra(const LocalFieldPtr& F) { return make_algebra(F, 1, 1); }

inline DMatrix as_dmatrix(const AlgebraPtr& A, const Mat<Elem>& M) {
  if (A->d() != 1) throw ConfigError("as_dmatrix needs a degree-1 algebra");
  DMatrix R(M.size(), std::vector<DElem>(M.empty() ? 0 : M[0].size()));
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) R[i][j] = A->from_F(M[i][j]);
  return R;
}

inline Mat<Elem> as_fmatrix(const DMatrix& M) {
  Mat<Elem> R(M.size());
  for (size_t i = 0; i < M.size(); ++i)
    for (const auto& x : M[i]) {
      if (x.algebra()->d() != 1) throw ConfigError("as_fmatrix needs a degree-1 algebra");
      R[i].push_back(x.algebra()->ext()->restrict_to_base(x.component(0)));
    }
  return R;
}

inline std::vector<Elem> flatten(const Mat<Elem>& M) {
  std::vector<Elem> v;
  for (const auto& row : M) v.insert(v.end(), row.begin(), row.end());
  return v;
}

inline int elem_mat_val(const Mat<Elem>& M) {
  int v = kInfVal;
  for (const auto& row : M)
    for (const auto& x : row) v = std::min(v, x.valuation());
  return v;
}

/// Valuation of M^{-1} for an invertible matrix over a field.
inline int elem_mat_inv_val(const Mat<Elem>& M) {
  return mat_val(mat_inv(as_dmatrix(matrix_algebra(M[0][0].field()), M)));
}

// ---- digit transport of algebra elements ------------------------------------

/// zeta: P_D-adic digits of x carried over to the algebra A.
inline DElem zeta(const AlgebraPtr& A, const DElem& x) {
  if (A->d() != x.algebra()->d() || A->h() != x.algebra()->h()) throw ConfigError("zeta: algebras differ in (d, h)");
  const int prec = x.precision();
  if (x.is_zero()) return A->zero(prec);
  const int v = x.valuation();
  if (prec - v > 1000000) throw PrecisionError("zeta: element carries no finite precision");
  std::vector<uint32_t> dg;
  for (int t = v; t < prec; ++t) dg.push_back(x.digit(t));
  return A->from_digits(v, dg);
}

inline DMatrix zeta(const AlgebraPtr& A, const DMatrix& M) {
  DMatrix R = M;
  for (auto& row : R)
    for (auto& x : row) x = zeta(A, x);
  return R;
}

/// Lift through the Cartan decomposition: zeta(k1) diag(pi^a) zeta(k2), a point of zeta-bar(K M K).
inline DMatrix zeta_cartan(const AlgebraPtr& A, const CartanForm& c, int prec) {
  return dmul(dmul(zeta(A, c.k1), diag_pi(A, c.a, prec)), zeta(A, c.k2));
}

/// A field m-close to F of the other characteristic, with the same residue field and precision.
inline ProximityTriple close_partner(const LocalFieldPtr& F, int m) {
  const auto& s = F->spec();
  const FieldSpec L = s.equal_char() ? make_local_field(0, s.p, s.f, m, s.N) : make_local_field(s.p, s.p, s.f, {}, s.N);
  if (!s.equal_char() && *s.e < m) throw ConfigError("a characteristic 0 field with e < m has no m-close partner");
  return make_proximity(F, LocalField::make(L), m);
}

// ---- closeness of vectors and matrices ---------------------------------------

/// Matrices over F and L, componentwise relative to the minimum valuation of M.
inline bool matrix_close(const Mat<Elem>& M, const Mat<Elem>& N, int l, const ProximityTriple& t) {
  return is_close(flatten(M), flatten(N), l, t);
}

/// Matrices over D_F and D_L: N - zeta(M) lies in P_D^{dl + v(M)}.
inline bool matrix_close(const DMatrix& M, const DMatrix& N, int l, const ProximityTriple& t) {
  if (l < 1 || l > t.m) throw ConfigError("closeness level l must satisfy 0 < l <= m");
  const auto& AL = N[0][0].algebra();
  const int w = mat_val(M);
  if (w == kInfVal) return mat_val(N) == kInfVal;
  const int need = AL->d() * l + w;
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) {
      const DElem diff = N[i][j] - zeta(AL, M[i][j].algebra()->truncate(M[i][j], need));
      if (M[i][j].precision() < need || diff.precision() < need)
        throw PrecisionError("matrix_close: operands known below the comparison level");
      if (diff.valuation() < need) return false;
    }
  return true;
}

/**
 * Level l' = l + v(sum a_i) - min v(a_i) at which the summands must be close
 * for the sums to be l-close.
 */
inline int sum_proximity_level(const std::vector<Elem>& a, int l) {
  if (a.empty()) throw ConfigError("empty family");
  Elem s = a[0].field()->zero(kInfVal / 2);
  int lo = kInfVal;
  for (const auto& x : a) {
    s = s + x;
    lo = std::min(lo, x.valuation());
  }
  if (s.is_zero()) throw MathError("sum_proximity_level: the sum vanishes at the available precision");
  return l + s.valuation() - lo;
}

// ---- polynomial values -----------------------------------------------------

/// Evaluation point of an integer polynomial: the entries of a matrix row by row.
struct PolyPoint {
  LocalFieldPtr field;
  std::vector<Elem> x;
  int v_M = 0;     ///< minimum entry valuation
  int v_Minv = 0;  ///< valuation of the inverse (0 when not applicable)
  int prec = 0;    ///< precision for integer constants
};

inline PolyPoint poly_point(const Mat<Elem>& M) {
  PolyPoint pt;
  pt.field = M[0][0].field();
  pt.x = flatten(M);
  pt.v_M = elem_mat_val(M);
  pt.v_Minv = elem_mat_inv_val(M);
  pt.prec = pt.field->N() + std::max(0, -pt.v_M) * static_cast<int>(M.size()) + 1;
  return pt;
}

struct PolyBound {
  int m = 0;
  int paper_m = 0;    ///< value of the stated formula
  int derived_m = 0;  ///< value certified by the error estimate entry by entry
  std::string formula;
};

/**
 * Stated bound for P(M) != 0 with k-closeness of P(M) and P(N):
 * m = k + v(P(M)) - min_{s in S} v(s(M)) - v(M) - v(M^{-1}), and when P has
 * a part p R of total degree mu, at least k + v(P(M)) + max(0, -mu v(M)).
 * With the variable t, (M; pi) is treated as the matrix M (+) pi.
 */
inline int paper_value_bound(const IntegerPolynomial& P, const PolyPoint& pt, int k) {
  const auto& F = *pt.field;
  const Elem val = P.evaluate(F, pt.x, pt.prec);
  if (val.is_zero()) throw MathError("P(M) = 0; use poly_zero_bound");
  const auto [Q, R] = P.split_mod(F.p());
  const Elem t = F.uniformizer_power(1, pt.prec);
  int min_s = kInfVal;
  for (const auto& [e, c] : Q.terms()) {
    const Elem s = IntegerPolynomial::monomial_value(F, e, pt.x, t, pt.prec);
    if (!s.is_zero()) min_s = std::min(min_s, s.valuation());
  }
  int vM = pt.v_M, vMi = pt.v_Minv;
  if (P.has_t()) vM = std::min(vM, 1), vMi = std::min(vMi, -1);
  int m = k + val.valuation() - min_s - vM - vMi;
  if (!R.is_zero()) m = std::max(m, k + val.valuation() + std::max(0, -R.total_degree() * vM));
  return m;
}

/**
 * Bound from the entrywise estimate: if N - zeta(M) lies in P^{m + v(M)} then
 * s(N) - lambda(s(M)) lies in P^{m + deg_X(s) v(M) + deg_t(s)} for every monomial.
 * target is the level (relative to v(P(M))) or the absolute valuation for zero values.
 */
inline int derived_bound(const IntegerPolynomial& P, const PolyPoint& pt, int target) {
  const auto [Q, R] = P.split_mod(pt.field->p());
  int m = 1;
  for (const auto* part : {&Q, &R})
    for (const auto& [e, c] : part->terms()) m = std::max(m, target - (P.degree_x(e) * pt.v_M + P.degree_t(e)));
  return m;
}

inline PolyBound poly_proximity_bounds(const IntegerPolynomial& P, const PolyPoint& pt, int k) {
  const Elem val = P.evaluate(*pt.field, pt.x, pt.prec);
  if (val.is_zero()) throw MathError("P(M) = 0; use poly_zero_bound");
  PolyBound b;
  b.paper_m = paper_value_bound(P, pt, k);
  b.derived_m = std::max(k, derived_bound(P, pt, k + val.valuation()));
  b.m = std::max(b.paper_m, b.derived_m);
  b.formula = "k + v(P(M)) - min_S v(s(M)) - v(M) - v(M^-1)";
  return b;
}

/// The stated value of m for P(M) != 0.
inline int poly_proximity_bound(const IntegerPolynomial& P, const Mat<Elem>& M, int k) {
  return paper_value_bound(P, poly_point(M), k);
}

/// For P(M) = 0: the stated route applies the value bound to P + 1.
inline PolyBound poly_zero_bounds(const IntegerPolynomial& P, const PolyPoint& pt, int k) {
  const IntegerPolynomial P1 = P + IntegerPolynomial::constant(P.nvars(), P.has_t(), 1);
  PolyBound b;
  b.paper_m = paper_value_bound(P1, pt, k);
  b.derived_m = std::max(k, derived_bound(P, pt, k));
  b.m = std::max(b.paper_m, b.derived_m);
  b.formula = "value bound of P + 1";
  return b;
}

inline int poly_zero_bound(const IntegerPolynomial& P, const Mat<Elem>& M, int k) {
  return poly_zero_bounds(P, poly_point(M), k).paper_m;
}

/// The polynomial det on n x n matrices, variables row by row.
inline IntegerPolynomial det_polynomial(int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  IntegerPolynomial out(n * n, false);
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    IntegerPolynomial::Exponents e(n * n, 0);
    for (int i = 0; i < n; ++i) e[i * n + perm[i]] += 1;
    out.add_term(e, inv % 2 ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---- sampled verification ---------------------------------------------------

struct ProximityReport {
  std::string name;
  int k = 0;
  int m = 0;
  std::string formula;
  uint64_t seed = 0;
  int samples = 0;
  int passed = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty() && passed == samples; }
};

inline std::vector<int> random_exponents(Rng& g, int r, int lo, int hi) {
  std::vector<int> a(r);
  for (auto& x : a) x = lo + static_cast<int>(g() % static_cast<uint64_t>(hi - lo + 1));
  std::sort(a.begin(), a.end());
  return a;
}

/// v(M M') >= v(M) + v(M') on random pairs.
inline ProximityReport verify_submultiplicative(const AlgebraPtr& A, int r, int samples, uint64_t seed) {
  ProximityReport rep{"submultiplicativity", 0, 0, "v(MM') >= v(M) + v(M')", seed, samples, 0, {}};
  const int prec = A->d() * A->base()->N();
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    const int v1 = static_cast<int>(g() % 5) - 2, v2 = static_cast<int>(g() % 5) - 2;
    const DMatrix M = random_dmatrix(g, A, r, v1, prec + v1), N = random_dmatrix(g, A, r, v2, prec + v2);
    if (mat_val(dmul(M, N)) >= mat_val(M) + mat_val(N))
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

/**
 * M + M_r(P_D^{dk - v(M^{-1})}) in K^k M K^k, witnessed by M^{-1}(M + B) in K^k,
 * and K^k M K^k in M + M_r(P_D^{dk + v(M)}) on random k1, k2.
 */
inline ProximityReport verify_ball_inclusions(const DMatrix& M, int k, int samples, uint64_t seed) {
  const auto& A = M[0][0].algebra();
  const int r = static_cast<int>(M.size()), d = A->d();
  const DMatrix Mi = mat_inv(M);
  const int w = mat_val(M), wi = mat_val(Mi);
  const int prec = mat_precision(M);
  ProximityReport rep{"ball inclusions", k, 0, "M + P^{dk - v(M^-1)} in K^k M K^k in M + P^{dk + v(M)}", seed, samples, 0, {}};
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    const DMatrix B = random_dmatrix(g, A, r, d * k - wi, prec);
    const DMatrix X = mat_add(M, B);
    const DMatrix W = dmul(Mi, X);
    const DMatrix I = identity(A, r, mat_precision(W));
    bool ok = mat_congruent(W, I, d * k);
    const DMatrix K1 = random_Kl(g, A, r, k, prec), K2 = random_Kl(g, A, r, k, prec);
    ok = ok && mat_congruent(dmul(dmul(K1, M), K2), M, d * k + w);
    if (ok)
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

/// m = k - v(M) - v(M^{-1}) in P_F units (valuations of D measured in P_F units, rounded up).
inline int zeta_in_ball_bound(const DMatrix& M, int k) {
  const int d = M[0][0].algebra()->d();
  return k + ceil_div(-(mat_val(M) + mat_val(mat_inv(M))), d);
}

/**
 * zeta(M) in zeta-bar(K^k M K^k) = K^k zeta(k1) A zeta(k2) K^k, witnessed by
 * (zeta(k1) A zeta(k2))^{-1} zeta(M) in K^k.
 */
inline bool zeta_in_ball(const DMatrix& M, int k, const AlgebraPtr& AL) {
  const int prec = mat_precision(M);
  const DMatrix N0 = zeta_cartan(AL, cartan(M), prec);
  const DMatrix W = dmul(mat_inv(N0), zeta(AL, M));
  return mat_congruent(W, identity(AL, static_cast<int>(M.size()), mat_precision(W)), AL->d() * k);
}

/// zeta(M) in zeta-bar(K^k M K^k) over a partner exactly m-close, m from zeta_in_ball_bound.
inline ProximityReport verify_zeta_in_ball(const AlgebraPtr& A, int r, int k, int hi, int samples, uint64_t seed) {
  ProximityReport rep{"zeta in transferred ball", k, 0, "m = k - v(M) - v(M^-1)", seed, samples, 0, {}};
  const int prec = A->d() * A->base()->N();
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    const DMatrix M = random_with_exponents(g, A, random_exponents(g, r, 0, hi), prec);
    const int m = zeta_in_ball_bound(M, k);
    rep.m = std::max(rep.m, m);
    const auto t = close_partner(A->base(), m);
    const auto AL = make_algebra(t.target, A->d(), A->h());
    if (zeta_in_ball(M, k, AL))
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

/**
 * Samples N in zeta-bar(K^m M K^m) over a partner exactly m-close and checks
 * P(M) ~_k P(N), or v(P(N)) >= k when P(M) = 0.
 */
inline ProximityReport verify_poly_bound(const IntegerPolynomial& P, const Mat<Elem>& M, int k, int m, int samples,
                                         uint64_t seed) {
  const PolyPoint pt = poly_point(M);
  const auto& F = pt.field;
  const Elem PM = P.evaluate(*F, pt.x, pt.prec);
  ProximityReport rep{PM.is_zero() ? "polynomial zero" : "polynomial value", k, m, P.str(), seed, samples, 0, {}};
  const auto t = close_partner(F, m);
  const auto AF = matrix_algebra(F), AL = matrix_algebra(t.target);
  const DMatrix DM = as_dmatrix(AF, M);
  const int n = static_cast<int>(M.size()), prec = mat_precision(DM);
  const DMatrix N0 = zeta_cartan(AL, cartan(DM), prec);
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    const DMatrix N = dmul(dmul(random_Kl(g, AL, n, m, prec), N0), random_Kl(g, AL, n, m, prec));
    const Elem PN = P.evaluate(*t.target, flatten(as_fmatrix(N)), pt.prec);
    bool ok;
    if (PM.is_zero()) {
      if (PN.precision() < k) throw PrecisionError("verify_poly_bound: P(N) known below P^k");
      ok = PN.valuation() >= k;
    } else {
      ok = is_close(PM, PN, k, t);
    }
    if (ok)
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

// ---- reduced characteristic polynomials through U(M') --------------------------

/**
 * U(M'): n x n over E with U[j r + s][k r + t] = sigma^j(e^k_{st}), where
 * M'_{st} = sum_k pi_D^k e^k_{st}.
 */
inline Mat<Elem> u_matrix(const DMatrix& M) {
  const auto& A = *M[0][0].algebra();
  const int r = static_cast<int>(M.size()), d = A.d(), n = r * d;
  Mat<Elem> U(n, std::vector<Elem>(n));
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < r; ++t)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
          const Elem& e = M[s][t].component(k);
          U[j * r + s][k * r + t] = e.is_zero() ? e : A.sigma(e, j);
        }
  return U;
}

/**
 * Psi(M') with entries linear in U(M') and t: entry (s d + k + j, t d + j) is
 * U[j r + s][k r + t], times t when k + j wraps past d.
 */
inline Mat<IntegerPolynomial> symbolic_psi(int r, int d) {
  const int n = r * d;
  const IntegerPolynomial zero(n * n, true);
  Mat<IntegerPolynomial> X(n, std::vector<IntegerPolynomial>(n, zero));
  const auto tv = IntegerPolynomial::t_variable(n * n);
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < r; ++t)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
          const auto u = IntegerPolynomial::variable(n * n, true, (j * r + s) * n + k * r + t);
          if (k + j < d)
            X[s * d + k + j][t * d + j] = u;
          else
            X[s * d + k + j - d][t * d + j] = u * tv;
        }
  return X;
}

/// P_0, ..., P_{n-1}: coefficients of the reduced characteristic polynomial as polynomials in U(M') and t.
inline std::vector<IntegerPolynomial> charpoly_coefficient_polys(int r, int d) {
  const int n = r * d;
  const auto cp = charpoly<IntegerPolynomial>(symbolic_psi(r, d), IntegerPolynomial(n * n, true),
                                              IntegerPolynomial::constant(n * n, true, 1));
  return std::vector<IntegerPolynomial>(cp.begin(), cp.end() - 1);
}

struct CharpolyBound {
  int m = 0;
  int N = 0;                    ///< minimum valuation of the non-leading coefficients
  std::vector<int> per_coeff;  ///< bound contributed by each coefficient
};

/**
 * m such that for F, L m-close every g' in zeta-bar(K^m M' K^m) has reduced
 * characteristic polynomial k-close to that of M'. Each coefficient P_i(U; pi)
 * gets the derived value bound at level k + N - v(c_i), or the zero bound at
 * valuation k + N when c_i = 0.
 */
inline CharpolyBound charpoly_transfer_bound(const DMatrix& M, int k) {
  const auto& A = *M[0][0].algebra();
  const int r = static_cast<int>(M.size()), d = A.d(), n = r * d;
  const Mat<Elem> U = u_matrix(M);
  PolyPoint pt;
  pt.field = A.E();
  pt.x = flatten(U);
  pt.v_M = elem_mat_val(U);
  pt.prec = A.E()->N() + std::max(0, -pt.v_M) * n + 1;
  const auto polys = charpoly_coefficient_polys(r, d);
  std::vector<Elem> c;
  CharpolyBound b;
  b.N = kInfVal;
  for (const auto& P : polys) {
    c.push_back(P.evaluate(*A.E(), pt.x, pt.prec));
    if (!c.back().is_zero()) b.N = std::min(b.N, c.back().valuation());
  }
  if (b.N == kInfVal) throw MathError("charpoly_transfer_bound: M' is singular");
  b.m = k;
  for (size_t i = 0; i < polys.size(); ++i) {
    const int target = k + b.N;
    const int mi = c[i].is_zero() ? derived_bound(polys[i], pt, target)
                                  : derived_bound(polys[i], pt, std::max(target, c[i].valuation() + 1));
    b.per_coeff.push_back(mi);
    b.m = std::max(b.m, mi);
  }
  return b;
}

/// Non-leading coefficients of a monic polynomial.
inline std::vector<Elem> non_leading(const Poly& P) { return std::vector<Elem>(P.begin(), P.end() - 1); }

inline ProximityReport verify_charpoly_transfer(const DMatrix& M, int k, int samples, uint64_t seed) {
  const auto& A = M[0][0].algebra();
  const CharpolyBound b = charpoly_transfer_bound(M, k);
  ProximityReport rep{"reduced characteristic polynomial", k, b.m, "derived from U(M') and N", seed, samples, 0, {}};
  const auto t = close_partner(A->base(), b.m);
  const auto AL = make_algebra(t.target, A->d(), A->h());
  const int r = static_cast<int>(M.size()), prec = mat_precision(M);
  const DMatrix N0 = zeta_cartan(AL, cartan(M), prec);
  const auto cp = non_leading(reduced_charpoly(M));
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    const DMatrix G = dmul(dmul(random_Kl(g, AL, r, b.m, prec), N0), random_Kl(g, AL, r, b.m, prec));
    if (is_close(cp, non_leading(reduced_charpoly(G)), k, t))
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

// ---- separability, companion matrices, correspondence ----------------------------

enum class Separability { Separable, Inseparable, Indeterminate };

/// Discriminant test through the Sylvester matrix of P and P'.
inline Separability separability(const Poly& P) {
  const int n = static_cast<int>(P.size()) - 1;
  if (n < 1) throw ConfigError("separability of a constant");
  if (n == 1) return Separability::Separable;
  const auto& F = *P[0].field();
  Poly dP;
  for (int i = 1; i <= n; ++i) dP.push_back(F.from_int(i, std::max(1, P[i].precision())) * P[i]);
  const int S = 2 * n - 1;
  const Elem z = F.zero(kInfVal / 2);
  Mat<Elem> syl(S, std::vector<Elem>(S, z));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j <= n; ++j) syl[i][i + j] = P[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) syl[n - 1 + i][i + j] = dP[n - 1 - j];
  int hi = 1, lo = 0;
  for (const auto& c : P) {
    if (c.precision() < kInfVal / 4) hi = std::max(hi, c.precision());
    if (!c.is_zero()) lo = std::min(lo, c.valuation());
  }
  const Elem disc = charpoly<Elem>(syl, z, F.one(hi - S * lo + 1))[0];
  if (!disc.is_zero()) return Separability::Separable;
  return disc.precision() >= kInfVal / 4 ? Separability::Inseparable : Separability::Indeterminate;
}

/// Companion matrix: ones below the diagonal, last column -c_0, ..., -c_{n-1}.
inline Mat<Elem> companion(const Poly& P) {
  const int n = static_cast<int>(P.size()) - 1;
  const auto& F = *P[0].field();
  int prec = kInfVal;
  for (const auto& c : P) prec = std::min(prec, c.precision());
  Mat<Elem> C(n, std::vector<Elem>(n, F.zero(prec)));
  for (int i = 1; i < n; ++i) C[i][i - 1] = F.one(prec);
  for (int i = 0; i < n; ++i) C[i][n - 1] = -P[i];
  return C;
}

struct LiftParams {
  int m = 0;
  int s = 0;
};

/// s = l - v(M) - v(M^{-1}) for the companion matrix M of P_M, and m = s.
inline LiftParams charpoly_lift_params(const Poly& PM, int l) {
  if (separability(PM) != Separability::Separable) throw MathError("charpoly_lift_params: P_M is not certified separable");
  if (PM[0].is_zero()) throw MathError("charpoly_lift_params: P_M has zero constant term");
  const Mat<Elem> M = companion(PM);
  const int s = l - elem_mat_val(M) - elem_mat_inv_val(M);
  return LiftParams{s, s};
}

/**
 * Perturbs lambda(P_M) inside P^{s + v} (v the minimum coefficient valuation)
 * and checks that Comp(P) lies in K^l zeta(M) K^l, witnessed by zeta(M)^{-1} Comp(P).
 */
inline ProximityReport verify_charpoly_lift(const Poly& PM, int l, int samples, uint64_t seed) {
  const LiftParams lp = charpoly_lift_params(PM, l);
  ProximityReport rep{"companion lift", l, lp.m, "s = l - v(M) - v(M^-1), m = s", seed, samples, 0, {}};
  const auto& F = PM[0].field();
  const auto t = close_partner(F, lp.m);
  const auto AL = matrix_algebra(t.target);
  int v = kInfVal, prec = kInfVal;
  for (const auto& c : non_leading(PM)) {
    v = std::min(v, c.valuation());
    prec = std::min(prec, c.precision());
  }
  Poly PL;
  for (const auto& c : PM) PL.push_back(lambda_formal(t, c));
  const DMatrix Z = as_dmatrix(AL, companion(PL));
  const DMatrix Zi = mat_inv(Z);
  for (int i = 0; i < samples; ++i) {
    Rng g(derive_seed(seed, i));
    Poly P = PL;
    for (int j = 0; j + 1 < static_cast<int>(P.size()); ++j)
      P[j] = P[j] + random_elem(g, *t.target, lp.s + v, prec);
    const DMatrix C = as_dmatrix(AL, companion(P));
    const DMatrix W = dmul(Zi, C);
    const bool close = is_close(non_leading(PM), non_leading(P), lp.s, t);
    if (close && mat_congruent(W, identity(AL, static_cast<int>(W.size()), mat_precision(W)), l))
      ++rep.passed;
    else
      rep.failures.push_back("sample " + std::to_string(i));
  }
  return rep;
}

namespace detail {
inline void require_separable(const Poly& P) {
  const auto s = separability(P);
  if (s == Separability::Inseparable) throw MathError("correspond: characteristic polynomial is inseparable");
  if (s == Separability::Indeterminate)
    throw MathError("correspond: separability is indeterminate at the available precision");
}
}  // namespace detail

/// g <-> g' over the same base field: equal separable reduced characteristic polynomials.
inline bool correspond(const DMatrix& g, const DMatrix& g2) {
  if (g[0][0].algebra()->base() != g2[0][0].algebra()->base()) throw ConfigError("correspond: different base fields");
  const Poly a = reduced_charpoly(g), b = reduced_charpoly(g2);
  detail::require_separable(a);
  detail::require_separable(b);
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const int k = std::min(a[i].precision(), b[i].precision());
    if (!a[i].field()->congruent(a[i], b[i], k)) return false;
  }
  return true;
}

/// Across a triple: separable reduced characteristic polynomials that are l-close.
inline bool correspond(const DMatrix& g, const DMatrix& g2, const ProximityTriple& t, int l) {
  if (g[0][0].algebra()->base() != t.source || g2[0][0].algebra()->base() != t.target)
    throw ConfigError("correspond: matrices do not live over the triple's fields");
  const Poly a = reduced_charpoly(g), b = reduced_charpoly(g2);
  detail::require_separable(a);
  detail::require_separable(b);
  if (a.size() != b.size()) return false;
  return is_close(non_leading(a), non_leading(b), l, t);
}

}  // namespace kclose
