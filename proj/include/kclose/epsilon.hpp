#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kclose/closeness.hpp"
#include "kclose/cyclic_algebra.hpp"
#include "kclose/cyclotomic.hpp"

namespace kclose {

// ---- additive character ----------------------------------------------------------

/**
 * psi(x) = zeta_p^{Tr(c_{-1}(x))} where c_{-1} is the Teichmuller digit at
 * pi^{-1}. Conductor 0. In characteristic 0 it is additive on pi^{-e} O / O,
 * so only fields with e >= N are accepted.
 */
class AdditiveCharacter {
 public:
  explicit AdditiveCharacter(LocalFieldPtr F) : F_(std::move(F)) {}
  const LocalFieldPtr& field() const { return F_; }
  /// Exponent of zeta_p, in [0, p).
  int exponent(const Elem& x) const {
    if (!x.is_zero() && x.valuation() >= 0) return 0;
    return F_->residue().trace(x.digit(-1));
  }
  Cyc value(const CycFieldPtr& K, const Elem& x) const {
    return Cyc::zeta(K, static_cast<long>(exponent(x)) * (K->order() / F_->p()));
  }

 private:
  LocalFieldPtr F_;
};

inline AdditiveCharacter make_additive_char(const LocalFieldPtr& F) {
  const auto& s = F->spec();
  if (!s.equal_char() && *s.e < s.N)
    throw ConfigError("additive character in characteristic 0 needs e >= N, got " + s.describe());
  AdditiveCharacter psi(F);
  bool nontrivial = false;
  for (uint32_t a = 1; a < static_cast<uint32_t>(F->q()); ++a) {
    if (psi.exponent(F->teich(a, 0, 2)) != 0) throw MathError("additive character is not trivial on O");
    if (psi.exponent(F->teich(a, -1, 2)) != 0) nontrivial = true;
  }
  if (!nontrivial) throw MathError("additive character is trivial on P^-1");
  return psi;
}

// ---- multiplicative characters ---------------------------------------------------

/**
 * Character of F^* trivial on 1 + P^table_level: chi(pi^k u) = chi(pi)^k chi0(u),
 * chi0(u) = zeta_E^{exponent[u mod P^table_level]} and chi(pi) = zeta_{pi_order}^{pi_exp}.
 * On D^* it acts through the reduced norm.
 */
struct MultiplicativeCharacter {
  std::string id;
  LocalFieldPtr field;
  int table_level = 0;
  int niv = 0;
  long E = 1;
  std::map<std::vector<uint32_t>, long> exponent;
  long pi_order = 1;
  long pi_exp = 0;

  bool unramified() const { return niv == 0; }
  /// Smallest M with every value in mu_M.
  long value_order() const { return std::lcm(E, pi_order); }

  std::vector<uint32_t> key(const Elem& u) const {
    std::vector<uint32_t> k(table_level);
    for (int i = 0; i < table_level; ++i) k[i] = u.digit(i);
    return k;
  }
  /// Exponent of zeta_{value_order()} giving chi(x) for x in F^*.
  long value_exponent(const Elem& x) const {
    if (x.is_zero()) throw MathError("character evaluated at zero");
    const long M = value_order();
    const Elem u = x.field()->shift(x, -x.valuation());
    const auto it = exponent.find(key(u));
    if (it == exponent.end()) throw MathError("unit missing from the character table");
    const long e = it->second * (M / E) + static_cast<long>(x.valuation()) * pi_exp * (M / pi_order);
    return ((e % M) + M) % M;
  }
  Cyc value(const CycFieldPtr& K, const Elem& x) const {
    return Cyc::zeta(K, value_exponent(x) * (K->order() / value_order()));
  }
  /// The same table over another field, with chi_L(pi_L) = chi(pi_F).
  MultiplicativeCharacter transported(const LocalFieldPtr& L) const {
    MultiplicativeCharacter c = *this;
    c.field = L;
    return c;
  }
};

/// (O/P^l)^* as digit tuples with its multiplication table.
struct UnitGroup {
  std::vector<std::vector<uint32_t>> elems;
  std::map<std::vector<uint32_t>, int> index;
  std::vector<std::vector<int>> mul;
};

inline UnitGroup unit_group(const LocalField& F, int l, long ceiling) {
  UnitGroup G;
  const long q = F.q();
  long size = l == 0 ? 1 : q - 1;
  for (int i = 1; i < l; ++i) size *= q;
  if (size > ceiling) throw CeilingExceeded("unit group of size " + std::to_string(size) + " exceeds the ceiling");
  std::vector<uint32_t> dg(l, 0);
  if (l > 0) dg[0] = 1;
  while (true) {
    G.index[dg] = static_cast<int>(G.elems.size());
    G.elems.push_back(dg);
    int k = l - 1;
    while (k >= 0) {
      if (++dg[k] < q) break;
      dg[k] = k == 0 ? 1 : 0;
      --k;
    }
    if (k < 0) break;
  }
  std::vector<Elem> vals;
  for (const auto& e : G.elems) vals.push_back(F.from_digits(0, e));
  const int n = static_cast<int>(G.elems.size());
  G.mul.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Elem x = vals[i] * vals[j];
      std::vector<uint32_t> k(l);
      for (int t = 0; t < l; ++t) k[t] = x.digit(t);
      G.mul[i][j] = G.index.at(k);
    }
  return G;
}

/**
 * All characters of F^* trivial on 1 + P^l, with chi(pi) = zeta_{pi_order}^{pi_exp}.
 * Built from a generating set of (O/P^l)^*: every assignment of roots of unity
 * to the generators is propagated over the group and kept when consistent.
 */
inline std::vector<MultiplicativeCharacter> characters_of_level(const LocalFieldPtr& F, int l, long pi_order = 1,
                                                                long pi_exp = 0, long ceiling = 100000) {
  if (l < 0) throw ConfigError("character level must be >= 0");
  const UnitGroup G = unit_group(*F, l, ceiling);
  const int n = static_cast<int>(G.elems.size());
  auto order = [&](int g) {
    int o = 1;
    for (int x = g; x != 0; x = G.mul[x][g]) ++o;
    return o;
  };
  auto closure = [&](const std::vector<int>& gens) {
    std::vector<bool> in(n, false);
    std::vector<int> stack{0};
    in[0] = true;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int g : gens) {
        const int y = G.mul[x][g];
        if (!in[y]) in[y] = true, stack.push_back(y);
      }
    }
    return in;
  };
  std::vector<int> gens;
  std::vector<bool> covered = closure(gens);
  for (int x = 0; x < n; ++x)
    if (!covered[x]) gens.push_back(x), covered = closure(gens);
  long E = 1;
  std::vector<long> ords;
  for (int g : gens) ords.push_back(order(g)), E = std::lcm(E, ords.back());
  for (int x = 0; x < n; ++x) E = std::lcm(E, static_cast<long>(order(x)));

  std::vector<MultiplicativeCharacter> out;
  std::vector<long> choice(gens.size(), 0);
  while (true) {
    std::vector<long> val(n, -1);
    val[0] = 0;
    std::vector<int> stack{0};
    bool ok = true;
    while (ok && !stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (size_t i = 0; i < gens.size() && ok; ++i) {
        const int y = G.mul[x][gens[i]];
        const long v = (val[x] + choice[i] * (E / ords[i])) % E;
        if (val[y] < 0)
          val[y] = v, stack.push_back(y);
        else if (val[y] != v)
          ok = false;
      }
    }
    if (ok) {
      MultiplicativeCharacter c;
      c.field = F;
      c.table_level = l;
      c.E = E;
      c.pi_order = pi_order;
      c.pi_exp = pi_exp;
      for (int x = 0; x < n; ++x) c.exponent[G.elems[x]] = val[x];
      c.niv = l;
      for (int lv = 0; lv <= l; ++lv) {
        bool trivial = true;
        for (int x = 0; x < n && trivial; ++x) {
          bool one = G.elems[x].empty() || G.elems[x][0] == 1;
          for (int t = 1; t < lv && one; ++t) one = G.elems[x][t] == 0;
          if (lv == 0 || one) trivial = val[x] == 0;
        }
        if (trivial) {
          c.niv = lv;
          break;
        }
      }
      std::string id = "l" + std::to_string(l) + ":";
      for (size_t i = 0; i < choice.size(); ++i) id += (i ? "," : "") + std::to_string(choice[i]);
      c.id = id + "|pi=" + std::to_string(pi_exp) + "/" + std::to_string(pi_order);
      out.push_back(std::move(c));
    }
    size_t k = 0;
    while (k < choice.size() && ++choice[k] == ords[k]) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  if (static_cast<int>(out.size()) != n) throw MathError("character count differs from the group order");
  return out;
}

// ---- zeta integrals ---------------------------------------------------------------

/// Cyclotomic field holding every value needed for chi on D^* and psi.
inline CycFieldPtr epsilon_field(const MultiplicativeCharacter& chi) {
  const long p = chi.field->p();
  return CyclotomicField::make(std::lcm(chi.value_order(), p == 2 ? 8L : 4 * p));
}

inline Elem nrd(const DElem& x) { return reduced_norm(DMatrix{{x}}); }

/// All units of O_D / P_D^K as padded representatives.
inline std::vector<DElem> delem_units(const AlgebraPtr& A, int K, int prec, long ceiling) {
  const long qE = A->qE();
  long size = qE - 1;
  for (int i = 1; i < K; ++i) size *= qE;
  if (size > ceiling) throw CeilingExceeded("unit enumeration of size " + std::to_string(size) + " exceeds the ceiling");
  std::vector<DElem> out;
  std::vector<uint32_t> dg(K, 0);
  dg[0] = 1;
  while (true) {
    out.push_back(A->pad(A->from_digits(0, dg), prec));
    int k = K - 1;
    while (k >= 0) {
      if (++dg[k] < qE) break;
      dg[k] = k == 0 ? 1 : 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

struct ZetaOptions {
  int extra_shells = 0;
  long ceiling = 200000;
};

/**
 * Rank-1 zeta data for chi o Nrd on D^* with Phi the indicator of K^l = 1 + P_D^{dl}.
 * Multiplicative Haar measure with vol(O_D^*) = 1; additive measure self-dual
 * for psi o trd.
 */
class GJZeta {
 public:
  GJZeta(AlgebraPtr A, MultiplicativeCharacter chi, int l, CycFieldPtr K = nullptr)
      : A_(std::move(A)), chi_(std::move(chi)), l_(l), K_(K ? std::move(K) : epsilon_field(chi_)), psi_(A_->base()) {
    if (l_ < std::max(chi_.niv, 1)) throw ConfigError("K^l must lie in the kernel of the character (l >= max(niv, 1))");
    if (chi_.field != A_->base()) throw ConfigError("character and algebra live over different fields");
    make_additive_char(A_->base());
  }

  const CycFieldPtr& scalars() const { return K_; }
  int d() const { return A_->d(); }
  long q() const { return A_->base()->q(); }

  /// vol(K^l) = 1 / [O_D^* : 1 + P_D^{dl}].
  QRat vol_Kl() const {
    QRat idx = A_->qE() - 1;
    for (int i = 1; i < d() * l_; ++i) idx *= A_->qE();
    return 1 / idx;
  }
  /// Z(s; f) = f(1) vol(K^l).
  ZetaRational zeta_f() const { return ZetaRational::constant(Cyc::rational(K_, vol_Kl())); }

  /// Lowest shell pi_D^j O_D^* meeting the support of the Fourier transform of Phi.
  int jmin() const { return 1 - d() - d() * l_; }

  /// Average over O_D^* of psi(trd(pi_D^j u)) chi^{-1}(Nrd u).
  Cyc shell_average(int j, long ceiling) const {
    const int dd = d();
    const int K = std::max({dd * l_, 1 - dd - j, 1});
    const int prec = K + dd * (l_ + 2);
    const auto units = delem_units(A_, K, prec, ceiling);
    const DElem pj = A_->pi_power(j, prec + j);
    Cyc s = Cyc::rational(K_, 0);
    for (const auto& u : units) {
      const Elem t = A_->reduced_trace(pj * u);
      s = s + psi_.value(K_, t) * chi_.value(K_, nrd(u)).inv();
    }
    return s * Cyc::rational(K_, QRat(1, static_cast<long>(units.size())));
  }

  /// chi(Nrd pi_D).
  Cyc chi_nrd_pi() const { return chi_.value(K_, nrd(A_->pi_power(1, 4 * d() + 2))); }

  /// Z((n+1)/2 - s; f-check) as a rational function of X = q^{-s}.
  ZetaRational zeta_dual(const ZetaOptions& opt = {}) const {
    const int dd = d();
    const long p = A_->base()->p();
    const int f = A_->base()->spec().f;
    const Cyc cpi = chi_nrd_pi();
    const Cyc cpi_inv = cpi.inv();
    // C = vol_add(P_D^{dl}) = q^{-d^2 l - d(d-1)/2}.
    const Cyc C = half_power(K_, p, f, -2L * dd * dd * l_ - static_cast<long>(dd) * (dd - 1));
    ZetaRational sum = ZetaRational::constant(Cyc::rational(K_, 0));
    for (int j = jmin() - opt.extra_shells; j <= -1; ++j) {
      const Cyc I = shell_average(j, opt.ceiling);
      if (I.is_zero()) continue;
      Cyc w = I * half_power(K_, p, f, -static_cast<long>(j) * (dd + 1));
      for (int i = 0; i < -j; ++i) w = w * cpi;
      sum = sum + ZetaRational::monomial(w, -j);
    }
    if (chi_.unramified()) {
      const Cyc beta = cpi_inv * half_power(K_, p, f, -(dd + 1));
      const Cyc one = Cyc::rational(K_, 1);
      sum = sum + ZetaRational({Cyc::rational(K_, 0), one}, {-beta, one});
    }
    return sum * ZetaRational::constant(C);
  }

  /// eps'(s) = (-1)^{d-1} Z((n+1)/2 - s; f-check) / Z((n-1)/2 + s; f).
  ZetaRational epsilon_prime(const ZetaOptions& opt = {}) const {
    const QRat sign = (d() - 1) % 2 == 0 ? 1 : -1;
    return zeta_dual(opt) * ZetaRational::constant(Cyc::rational(K_, sign)) / zeta_f();
  }

  /// L(1-s; chi-check) / L(s; chi): 1 when ramified, else X(1 - aX)/(X - b).
  ZetaRational l_ratio() const {
    if (!chi_.unramified()) return ZetaRational::constant(Cyc::rational(K_, 1));
    const long p = A_->base()->p();
    const int f = A_->base()->spec().f;
    const Cyc cpi = chi_.value(K_, A_->base()->uniformizer_power(1, 2));
    const Cyc a = cpi * half_power(K_, p, f, -(d() - 1));
    const Cyc b = cpi.inv() * half_power(K_, p, f, -(d() + 1));
    const Cyc zero = Cyc::rational(K_, 0), one = Cyc::rational(K_, 1);
    return ZetaRational({zero, one, -a}, {-b, one});
  }

 private:
  AlgebraPtr A_;
  MultiplicativeCharacter chi_;
  int l_;
  CycFieldPtr K_;
  AdditiveCharacter psi_;
};

struct EpsilonResult {
  std::string character;
  int niv = 0;
  int niv_D = 0;
  int d = 1;
  int level_used = 1;
  ZetaRational eps_prime;
  Cyc constant;
  int conductor = 0;
  bool stable = false;
  /// m = niv + n - 1 with niv the K^l-level.
  bool identity_Kl_level = false;
  /// m = niv_D + n - 1 with niv_D the level in P_D units.
  bool identity_PD_level = false;
};

/// Level of chi o Nrd measured in P_D units: trivial on 1 + P_D^{niv_D}.
inline int nrd_level(int niv, int d) { return niv == 0 ? 0 : d * (niv - 1) + 1; }

/**
 * eps' and eps = c X^m for chi o Nrd on D^*. Recomputed at K^{l+1} and with
 * extra shells below the support to confirm stability.
 */
inline EpsilonResult epsilon_factor(const AlgebraPtr& A, const MultiplicativeCharacter& chi, const ZetaOptions& opt = {},
                                    CycFieldPtr K = nullptr) {
  const int l = std::max(chi.niv, 1);
  const GJZeta z(A, chi, l, K);
  EpsilonResult r;
  r.character = chi.id;
  r.niv = chi.niv;
  r.d = A->d();
  r.niv_D = nrd_level(chi.niv, r.d);
  r.level_used = l;
  r.eps_prime = z.epsilon_prime(opt);
  ZetaOptions wide = opt;
  wide.extra_shells = opt.extra_shells + A->d();
  const GJZeta z2(A, chi, l + 1, z.scalars());
  r.stable = z.epsilon_prime(wide) == r.eps_prime && z2.epsilon_prime(opt) == r.eps_prime;
  const ZetaRational eps = r.eps_prime / z.l_ratio();
  const auto mono = eps.as_monomial();
  if (!mono) throw MathError("epsilon factor of " + chi.id + " is not a monomial: " + eps.str());
  r.constant = mono->first;
  r.conductor = mono->second;
  r.identity_Kl_level = r.conductor == chi.niv + r.d - 1;
  r.identity_PD_level = r.conductor == r.niv_D + r.d - 1;
  return r;
}

// ---- transfer -------------------------------------------------------------------

struct EpsilonComparison {
  EpsilonResult source;
  EpsilonResult target;
  bool eps_prime_equal = false;
  bool eps_equal = false;
  bool ok() const { return eps_prime_equal && eps_equal && source.stable && target.stable; }
};

struct EpsilonTransferReport {
  std::string params;
  int l = 0;
  std::vector<EpsilonComparison> rows;
  bool passed() const {
    for (const auto& r : rows)
      if (!r.ok()) return false;
    return !rows.empty();
  }
};

/**
 * For every character of F^* of level <= l, composes with Nrd on D_F^* and on
 * D_L^* (transported through the digit identification, chi_L(pi_L) = chi(pi_F))
 * and compares eps' and eps computed independently on both sides.
 */
inline EpsilonTransferReport epsilon_transfer_check(const ProximityTriple& t, int d, int h, int l, long pi_order = 1,
                                                    long pi_exp = 0, const ZetaOptions& opt = {}) {
  if (l > t.m) throw ConfigError("character level l exceeds the closeness level m");
  EpsilonTransferReport rep;
  rep.l = l;
  rep.params = t.source->spec().describe() + " -> " + t.target->spec().describe() + " d=" + std::to_string(d) +
               " l=" + std::to_string(l) + " m=" + std::to_string(t.m);
  const AlgebraPtr AF = make_algebra(t.source, d, h);
  const AlgebraPtr AL = make_algebra(t.target, d, h);
  const auto charsL = characters_of_level(t.target, l, pi_order, pi_exp, opt.ceiling);
  for (const auto& chi : characters_of_level(t.source, l, pi_order, pi_exp, opt.ceiling)) {
    const MultiplicativeCharacter chiL = chi.transported(t.target);
    bool is_character = false;
    for (const auto& c : charsL) is_character = is_character || c.exponent == chiL.exponent;
    if (!is_character) throw MathError("transported table is not a character of the target unit group");
    const CycFieldPtr K = epsilon_field(chi);
    EpsilonComparison row;
    row.source = epsilon_factor(AF, chi, opt, K);
    row.target = epsilon_factor(AL, chiL, opt, K);
    row.eps_prime_equal = row.source.eps_prime == row.target.eps_prime;
    row.eps_equal = row.source.constant == row.target.constant && row.source.conductor == row.target.conductor;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace kclose
