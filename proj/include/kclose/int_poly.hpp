#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kclose/local_field.hpp"

namespace kclose {

/**
 * Polynomial with integer coefficients in variables X_0..X_{n-1}, plus an
 * optional variable t evaluated at the uniformizer. Exponent vectors have
 * length nvars (+1 for t, stored last).
 */
class IntegerPolynomial {
 public:
  using Int = boost::multiprecision::cpp_int;
  using Exponents = std::vector<int>;

  IntegerPolynomial() = default;
  IntegerPolynomial(int nvars, bool has_t) : nvars_(nvars), has_t_(has_t) {}

  static IntegerPolynomial constant(int nvars, bool has_t, const Int& c) {
    IntegerPolynomial p(nvars, has_t);
    if (c != 0) p.terms_[Exponents(p.width(), 0)] = c;
    return p;
  }
  static IntegerPolynomial variable(int nvars, bool has_t, int i) {
    IntegerPolynomial p(nvars, has_t);
    Exponents e(p.width(), 0);
    e.at(i) = 1;
    p.terms_[e] = 1;
    return p;
  }
  static IntegerPolynomial t_variable(int nvars) { return variable(nvars, true, nvars); }

  int nvars() const { return nvars_; }
  bool has_t() const { return has_t_; }
  int width() const { return nvars_ + (has_t_ ? 1 : 0); }
  const std::map<Exponents, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Int& c) {
    if (static_cast<int>(e.size()) != width()) throw ConfigError("monomial has the wrong number of variables");
    auto& x = terms_[e];
    x += c;
    if (x == 0) terms_.erase(e);
  }

  /// Degree in the X variables of a monomial.
  int degree_x(const Exponents& e) const {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += e[i];
    return s;
  }
  int degree_t(const Exponents& e) const { return has_t_ ? e[nvars_] : 0; }
  int total_degree() const {
    int s = 0;
    for (const auto& [e, c] : terms_) s = std::max(s, degree_x(e) + degree_t(e));
    return s;
  }

  IntegerPolynomial operator+(const IntegerPolynomial& o) const {
    check(o);
    IntegerPolynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  IntegerPolynomial operator-(const IntegerPolynomial& o) const {
    check(o);
    IntegerPolynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  IntegerPolynomial operator*(const IntegerPolynomial& o) const {
    check(o);
    IntegerPolynomial r(nvars_, has_t_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) {
        Exponents e(a.size());
        for (size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const IntegerPolynomial& a, const IntegerPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.has_t_ == b.has_t_ && a.terms_ == b.terms_;
  }

  /**
   * P = Q + p R with every coefficient of Q in {1, ..., p-1} (or absent).
   */
  std::pair<IntegerPolynomial, IntegerPolynomial> split_mod(long p) const {
    IntegerPolynomial Q(nvars_, has_t_), R(nvars_, has_t_);
    for (const auto& [e, c] : terms_) {
      Int rem = c % p;
      if (rem < 0) rem += p;
      if (rem != 0) Q.add_term(e, rem);
      if (c != rem) R.add_term(e, (c - rem) / p);
    }
    return {Q, R};
  }

  /// Value of the monomial e at (x, t).
  static Elem monomial_value(const LocalField& F, const Exponents& e, const std::vector<Elem>& x, const Elem& t,
                             int prec) {
    Elem v = F.one(prec);
    for (size_t i = 0; i < e.size(); ++i) {
      const Elem& b = i < x.size() ? x[i] : t;
      for (int k = 0; k < e[i]; ++k) v = v * b;
    }
    return v;
  }

  /// P(x; pi) with integer coefficients known modulo P^prec.
  Elem evaluate(const LocalField& F, const std::vector<Elem>& x, int prec) const {
    if (static_cast<int>(x.size()) != nvars_) throw ConfigError("wrong number of values for the polynomial");
    const Elem t = F.uniformizer_power(1, std::max(1, prec - 1));
    Elem s = F.zero(prec);
    for (const auto& [e, c] : terms_) {
      if (abs(c) > Int(1L << 40)) throw ConfigError("coefficient too large to evaluate");
      s = s + F.from_int(static_cast<long>(c), prec) * monomial_value(F, e, x, t, prec);
    }
    return s;
  }

  /// Sparse monomial list, e.g. "3*x0^2*x3 - t".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (int i = 0; i < width(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += i < nvars_ ? "x" + std::to_string(i) : "t";
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      const Int a = c < 0 ? Int(-c) : c;
      std::string term = mono.empty() ? a.str() : (a == 1 ? mono : a.str() + "*" + mono);
      out += out.empty() ? (c < 0 ? "-" + term : term) : (c < 0 ? " - " + term : " + " + term);
    }
    return out;
  }

 private:
  void check(const IntegerPolynomial& o) const {
    if (o.nvars_ != nvars_ || o.has_t_ != has_t_) throw ConfigError("polynomials over different variable sets");
  }

  int nvars_ = 0;
  bool has_t_ = false;
  std::map<Exponents, Int> terms_;
};

}  // namespace kclose
