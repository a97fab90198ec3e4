#pragma once

#include <memory>
#include <vector>

#include "kclose/local_field.hpp"

namespace kclose {

/**
 * Unramified extension E/F of degree d: same uniformizer, residue field
 * F_{q^d}. sigma is the arithmetic Frobenius (x -> x^q on residues), acting on
 * elements digit by digit through their Teichmuller expansions.
 */
class UnramifiedExtension {
 public:
  UnramifiedExtension(LocalFieldPtr base, int d) : F_(std::move(base)), d_(d) {
    if (d < 1) throw ConfigError("extension degree must be >= 1");
    FieldSpec s = F_->spec();
    s.f = s.f * d;
    E_ = LocalField::make(s);
    embed_ = residue_embedding(F_->residue(), E_->residue());
    const auto& kE = E_->residue();
    restrict_.assign(kE.q(), kNone);
    for (uint32_t a = 0; a < embed_.size(); ++a) restrict_[embed_[a]] = a;
    sigma_.assign(d, std::vector<uint32_t>(kE.q()));
    for (int i = 0; i < d; ++i)
      for (uint32_t a = 0; a < kE.q(); ++a) sigma_[i][a] = kE.frob(a, F_->spec().f * i);
  }

  const LocalFieldPtr& base() const { return F_; }
  const LocalFieldPtr& ext() const { return E_; }
  int d() const { return d_; }

  /// Residue table of sigma^i (i taken modulo d).
  const std::vector<uint32_t>& sigma_table(long i) const { return sigma_[((i % d_) + d_) % d_]; }
  const std::vector<uint32_t>& embedding_table() const { return embed_; }

  Elem embed(const Elem& x) const { return F_->map_digits(x, embed_, *E_); }
  Elem frobenius_power(const Elem& x, long i) const { return E_->map_digits(x, sigma_table(i), *E_); }
  /// True iff every digit lies in the residue field of F, i.e. x is F-rational.
  bool in_base(const Elem& x) const {
    for (auto a : x.digits())
      if (restrict_[a] == kNone) return false;
    return true;
  }
  Elem restrict_to_base(const Elem& x) const {
    if (!in_base(x)) throw MathError("element is not rational over the base field");
    if (x.is_zero()) return F_->zero(x.precision());
    Digits d(x.digits().size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = restrict_[x.digits()[i]];
    return F_->from_digits(x.valuation(), d);
  }
  /// Tr_{E/F}(x) = sum_i sigma^i(x), returned in F.
  Elem trace(const Elem& x) const {
    Elem s = E_->zero(x.precision());
    for (int i = 0; i < d_; ++i) s = s + frobenius_power(x, i);
    return restrict_to_base(s);
  }

 private:
  static constexpr uint32_t kNone = 0xffffffffu;
  LocalFieldPtr F_;
  LocalFieldPtr E_;
  int d_;
  std::vector<uint32_t> embed_;
  std::vector<uint32_t> restrict_;
  std::vector<std::vector<uint32_t>> sigma_;
};

using ExtensionPtr = std::shared_ptr<const UnramifiedExtension>;

inline ExtensionPtr unramified_extension(const LocalFieldPtr& F, int d) {
  return std::make_shared<const UnramifiedExtension>(F, d);
}

inline Elem frobenius_power(const UnramifiedExtension& ext, const Elem& x, long i) {
  return ext.frobenius_power(x, i);
}

}  // namespace kclose
