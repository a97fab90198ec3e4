#pragma once

#include <vector>

#include "kclose/extension.hpp"
#include "kclose/polynomial.hpp"

namespace kclose {

/// The irreducible factor over k_F of the minimal polynomial of the primitive element of k_E, low degree first.
inline std::vector<uint32_t> residue_min_poly(const UnramifiedExtension& ext) {
  const auto& kE = ext.ext()->residue();
  const auto& kF = ext.base()->residue();
  const uint32_t g = kE.primitive();
  std::vector<uint32_t> c{1};
  for (int i = 0; i < ext.d(); ++i) {
    const uint32_t root = kE.frob(g, kF.f() * i);
    std::vector<uint32_t> n(c.size() + 1, 0);
    for (size_t j = 0; j < c.size(); ++j) {
      n[j + 1] = kE.add(n[j + 1], c[j]);
      n[j] = kE.sub(n[j], kE.mul(root, c[j]));
    }
    c = std::move(n);
  }
  std::vector<uint32_t> restrict(kE.q(), 0xffffffffu);
  const auto& emb = ext.embedding_table();
  for (uint32_t a = 0; a < emb.size(); ++a) restrict[emb[a]] = a;
  std::vector<uint32_t> out(c.size());
  for (size_t j = 0; j < c.size(); ++j) {
    if (restrict[c[j]] == 0xffffffffu) throw MathError("minimal polynomial is not rational over k_F");
    out[j] = restrict[c[j]];
  }
  return out;
}

/**
 * The unique monic degree-d factor of X^{q^d-1} - 1 over O/P^m reducing to
 * the minimal polynomial of the primitive element of k_E. Its roots are the
 * Teichmuller lifts of the Frobenius conjugates of that element.
 */
inline Poly hensel_lift_factor(const FieldSpec& spec, int d, int m) {
  if (m < 1) throw ConfigError("hensel_lift_factor: m must be >= 1");
  if (m > spec.N) throw ConfigError("hensel_lift_factor: m exceeds the working precision N");
  auto F = LocalField::make(spec);
  auto ext = unramified_extension(F, d);
  const auto& E = ext->ext();
  const auto& kE = E->residue();
  const uint32_t g = kE.primitive();
  Poly c{E->one(m)};
  for (int i = 0; i < d; ++i) {
    const Elem root = E->teich(kE.frob(g, spec.f * i), 0, m);
    Poly lin{-root, E->one(m)};
    c = poly_mul(c, lin);
  }
  Poly out;
  for (const auto& x : c) out.push_back(F->truncate(ext->restrict_to_base(x), m));
  return out;
}

}  // namespace kclose
