#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kclose/errors.hpp"
#include "kclose/residue_field.hpp"

namespace kclose {

/**
 * Truncated Witt ring W_K(F_Q) = (Z/p^K)[x]/(g), g the integer lift of the
 * residue modulus. Used as the coefficient ring of the Eisenstein model.
 */
class GaloisRing {
 public:
  static constexpr int kMaxDeg = 8;
  using Elem = std::array<int64_t, kMaxDeg>;

  GaloisRing(ResidueFieldPtr k, int K) : k_(std::move(k)), K_(K) {
    F_ = k_->f();
    if (F_ > kMaxDeg) throw ConfigError("residue degree too large for the Witt model");
    if (K < 1) throw ConfigError("Witt length must be >= 1");
    M_ = 1;
    for (int i = 0; i < K; ++i) {
      M_ *= k_->p();
      if (M_ > (int64_t{1} << 31)) throw ConfigError("Witt modulus p^K too large");
    }
    teich_.resize(k_->q());
    // Teichmuller lift: any lift raised to Q^(K-1).
    for (uint32_t a = 0; a < k_->q(); ++a) {
      Elem x = lift(a);
      for (int i = 1; i < K_; ++i) x = pow(x, k_->q());
      teich_[a] = x;
    }
  }

  int K() const { return K_; }
  int64_t modulus() const { return M_; }
  const ResidueField& residue() const { return *k_; }

  Elem zero() const { return Elem{}; }
  Elem one() const {
    Elem r{};
    r[0] = 1 % M_;
    return r;
  }
  Elem from_int(int64_t n) const {
    Elem r{};
    r[0] = ((n % M_) + M_) % M_;
    return r;
  }
  Elem lift(uint32_t a) const {
    Elem r{};
    const auto c = k_->coords(a);
    for (int i = 0; i < F_; ++i) r[i] = c[i];
    return r;
  }
  const Elem& teich(uint32_t a) const { return teich_[a]; }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r{};
    for (int i = 0; i < F_; ++i) {
      r[i] = a[i] + b[i];
      if (r[i] >= M_) r[i] -= M_;
    }
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r{};
    for (int i = 0; i < F_; ++i) {
      r[i] = a[i] - b[i];
      if (r[i] < 0) r[i] += M_;
    }
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r{};
    for (int i = 0; i < F_; ++i) r[i] = a[i] == 0 ? 0 : M_ - a[i];
    return r;
  }
  Elem mul_int(const Elem& a, int64_t n) const {
    n = ((n % M_) + M_) % M_;
    Elem r{};
    for (int i = 0; i < F_; ++i) r[i] = (a[i] * n) % M_;
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    if (F_ == 1) {
      Elem r{};
      r[0] = (a[0] * b[0]) % M_;
      return r;
    }
    std::array<int64_t, 2 * kMaxDeg> t{};
    for (int i = 0; i < F_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < F_; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % M_;
    }
    const auto& g = k_->modulus();
    for (int i = 2 * F_ - 2; i >= F_; --i) {
      const int64_t c = t[i];
      if (c == 0) continue;
      t[i] = 0;
      for (int j = 0; j < F_; ++j) {
        t[i - F_ + j] = (t[i - F_ + j] - c * g[j]) % M_;
        if (t[i - F_ + j] < 0) t[i - F_ + j] += M_;
      }
    }
    Elem r{};
    for (int i = 0; i < F_; ++i) r[i] = t[i];
    return r;
  }
  Elem pow(Elem a, long e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  /// Residue class modulo p as a residue field index.
  uint32_t residue_of(const Elem& a) const {
    std::vector<int> c(F_);
    for (int i = 0; i < F_; ++i) c[i] = static_cast<int>(a[i] % k_->p());
    return k_->from_coords(c);
  }
  bool divisible_by_p(const Elem& a) const {
    for (int i = 0; i < F_; ++i)
      if (a[i] % k_->p() != 0) return false;
    return true;
  }
  /// a / p for a divisible by p; the top p-adic digit of the result is unknown and set to 0.
  Elem div_p(const Elem& a) const {
    Elem r{};
    for (int i = 0; i < F_; ++i) r[i] = a[i] / k_->p();
    return r;
  }
  bool is_zero(const Elem& a) const {
    for (int i = 0; i < F_; ++i)
      if (a[i] != 0) return false;
    return true;
  }

 private:
  ResidueFieldPtr k_;
  int K_;
  int F_;
  int64_t M_;
  std::vector<Elem> teich_;
};

}  // namespace kclose
