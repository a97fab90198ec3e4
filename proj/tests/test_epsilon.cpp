#include "support.hpp"

using namespace kclose;
using namespace kclose::testing;

namespace {

const MultiplicativeCharacter& with_niv(const std::vector<MultiplicativeCharacter>& chars, int niv) {
  for (const auto& c : chars)
    if (c.niv == niv) return c;
  throw std::runtime_error("no character of the requested level");
}

}  // namespace

TEST(CyclotomicTest, SquareRoots) {
  for (long p : {2L, 3L, 5L, 7L}) {
    auto K = CyclotomicField::make(p == 2 ? 8 : 4 * p);
    const Cyc s = sqrt_prime(K, p);
    EXPECT_EQ(s * s, Cyc::rational(K, p)) << p;
    EXPECT_EQ(half_power(K, p, 1, 3), Cyc::rational(K, p) * s);
    EXPECT_EQ(half_power(K, p, 2, -1), Cyc::rational(K, QRat(1, p)));
    EXPECT_EQ(half_power(K, p, 1, -1) * half_power(K, p, 1, 1), Cyc::rational(K, 1));
  }
  EXPECT_THROW(sqrt_prime(CyclotomicField::make(4), 2), ConfigError);
  EXPECT_THROW(sqrt_prime(CyclotomicField::make(6), 3), ConfigError);
}

TEST(CyclotomicTest, FieldArithmetic) {
  auto K = CyclotomicField::make(12);
  EXPECT_EQ(K->degree(), 4);
  const Cyc z = Cyc::zeta(K, 1);
  Cyc w = Cyc::rational(K, 1);
  for (int i = 0; i < 12; ++i) w = w * z;
  EXPECT_EQ(w, Cyc::rational(K, 1));
  EXPECT_EQ(Cyc::zeta(K, 6), Cyc::rational(K, -1));
  Rng g(4);
  for (int i = 0; i < 30; ++i) {
    std::vector<QRat> c(4);
    for (auto& x : c) x = QRat(static_cast<long>(g() % 7) - 3, 1 + static_cast<long>(g() % 3));
    const Cyc x(K, c);
    if (x.is_zero()) continue;
    EXPECT_EQ(x * x.inv(), Cyc::rational(K, 1));
    EXPECT_EQ((x + z) - z, x);
  }
  EXPECT_THROW(Cyc::rational(K, 0).inv(), MathError);
  EXPECT_EQ((-Cyc::rational(K, 1) + Cyc::rational(K, 2) * Cyc::zeta(K, 2)).str(), "-1 + 2*z^2");
}

TEST(CyclotomicTest, RationalFunctions) {
  auto K = CyclotomicField::make(4);
  const Cyc one = Cyc::rational(K, 1), two = Cyc::rational(K, 2);
  const ZetaRational x = ZetaRational::monomial(two, 3);
  const auto mono = (x * ZetaRational::monomial(one, -1)).as_monomial();
  ASSERT_TRUE(mono.has_value());
  EXPECT_EQ(mono->first, two);
  EXPECT_EQ(mono->second, 2);
  const ZetaRational r({one, one}, {one});
  EXPECT_FALSE(r.as_monomial().has_value());
  EXPECT_EQ(r / r, ZetaRational::constant(one));
  EXPECT_EQ(r + ZetaRational::constant(-one), ZetaRational::monomial(one, 1));
}

TEST(AdditiveCharacterTest, AdditiveOnPiMinusTwo) {
  for (const auto& F : {fq_t(2, 4), fq_t(3, 4), fq_t(2, 4, 2), char0(2, 4, 4), char0(3, 4, 4)}) {
    const AdditiveCharacter psi = make_additive_char(F);
    const auto all = all_digit_vectors(F->q(), 2);
    for (const auto& a : all)
      for (const auto& b : all) {
        const Elem x = F->from_digits(-2, a), y = F->from_digits(-2, b);
        EXPECT_EQ(psi.exponent(x + y), (psi.exponent(x) + psi.exponent(y)) % F->p()) << F->spec().describe();
      }
    EXPECT_EQ(psi.exponent(F->one(3)), 0);
  }
  EXPECT_THROW(make_additive_char(char0(2, 2, 4)), ConfigError);
}

TEST(MultiplicativeCharacterTest, Counts) {
  EXPECT_EQ(characters_of_level(fq_t(3, 3), 1).size(), 2u);
  EXPECT_EQ(characters_of_level(fq_t(2, 3), 0).size(), 1u);
  EXPECT_EQ(characters_of_level(fq_t(2, 3), 2).size(), 2u);
  EXPECT_EQ(characters_of_level(fq_t(3, 3), 2).size(), 6u);
  EXPECT_EQ(characters_of_level(fq_t(2, 3), 3).size(), 4u);
  EXPECT_THROW(characters_of_level(fq_t(3, 8), 8, 1, 0, 100), CeilingExceeded);
  const auto chars = characters_of_level(fq_t(3, 3), 2);
  EXPECT_EQ(std::count_if(chars.begin(), chars.end(), [](const auto& c) { return c.niv == 2; }), 4);
}

TEST(MultiplicativeCharacterTest, Multiplicative) {
  for (const auto& F : {fq_t(3, 4), char0(2, 4, 4)}) {
    for (const auto& chi : characters_of_level(F, 2, 4, 1)) {
      Rng g(derive_seed(chi.niv, F->p()));
      const long M = chi.value_order();
      for (int i = 0; i < 50; ++i) {
        const Elem x = F->teich(1 + g() % (F->q() - 1), static_cast<int>(g() % 3) - 1, 3) +
                       random_elem(g, *F, 3, 4);
        const Elem y = F->teich(1 + g() % (F->q() - 1), static_cast<int>(g() % 3), 3) + random_elem(g, *F, 3, 4);
        EXPECT_EQ(chi.value_exponent(x * y), (chi.value_exponent(x) + chi.value_exponent(y)) % M);
      }
      EXPECT_EQ(chi.value_exponent(F->uniformizer_power(1, 3)), M / 4);
    }
  }
}

TEST(EpsilonTest, QuadraticCharacterOfF3) {
  auto F = fq_t(3, 3);
  const auto chars = characters_of_level(F, 1);
  const EpsilonResult r = epsilon_factor(make_algebra(F, 1, 1), with_niv(chars, 1));
  const auto& K = r.constant.field();
  EXPECT_EQ(r.conductor, 1);
  EXPECT_TRUE(r.stable);
  EXPECT_TRUE(r.identity_Kl_level);
  EXPECT_EQ(r.constant, -Cyc::rational(K, 1) + Cyc::rational(K, 2) * Cyc::zeta(K, K->order() / 6));
  EXPECT_EQ(r.constant * r.constant, Cyc::rational(K, -3));
}

TEST(EpsilonTest, UnramifiedRankOne) {
  auto F = fq_t(2, 3);
  const auto chi = characters_of_level(F, 0).front();
  const EpsilonResult r = epsilon_factor(make_algebra(F, 1, 1), chi);
  EXPECT_EQ(r.conductor, 0);
  EXPECT_EQ(r.constant, Cyc::rational(r.constant.field(), 1));
  EXPECT_TRUE(r.stable);
}

TEST(EpsilonTest, UnramifiedOnQuaternionAlgebra) {
  auto F = fq_t(2, 3);
  const auto chi = characters_of_level(F, 0).front();
  const EpsilonResult r = epsilon_factor(make_algebra(F, 2, 1), chi);
  const auto& K = r.constant.field();
  EXPECT_EQ(r.conductor, 1);
  EXPECT_EQ(r.constant, -sqrt_prime(K, 2));
  EXPECT_TRUE(r.identity_Kl_level);
  EXPECT_TRUE(r.stable);
}

TEST(EpsilonTest, QuadraticCharacterOnQuaternionAlgebraOverF3) {
  auto F = fq_t(3, 3);
  const auto chars = characters_of_level(F, 1);
  const auto A = make_algebra(F, 2, 1);
  const EpsilonResult triv = epsilon_factor(A, with_niv(chars, 0));
  EXPECT_EQ(triv.conductor, 1);
  const EpsilonResult quad = epsilon_factor(A, with_niv(chars, 1));
  EXPECT_EQ(quad.conductor, 2);
  EXPECT_EQ(quad.niv_D, 1);
  EXPECT_EQ(quad.constant, Cyc::rational(quad.constant.field(), -3));
  EXPECT_TRUE(quad.identity_Kl_level);
  EXPECT_TRUE(quad.identity_PD_level);
  EXPECT_TRUE(quad.stable);
}

TEST(EpsilonTest, NrdLevel) {
  EXPECT_EQ(nrd_level(0, 2), 0);
  EXPECT_EQ(nrd_level(1, 2), 1);
  EXPECT_EQ(nrd_level(2, 2), 3);
  EXPECT_EQ(nrd_level(2, 3), 4);
}

TEST(EpsilonTest, ZetaRejectsLevelBelowConductor) {
  auto F = fq_t(3, 3);
  const auto chars = characters_of_level(F, 2);
  EXPECT_THROW(GJZeta(make_algebra(F, 1, 1), with_niv(chars, 2), 1), ConfigError);
  EXPECT_THROW(GJZeta(make_algebra(fq_t(3, 4), 1, 1), with_niv(chars, 2), 2), ConfigError);
}

TEST(EpsilonTest, TransferAcrossCloseFields) {
  const auto t3 = make_proximity(make_local_field(3, 3, 1, {}, 3), make_local_field(0, 3, 1, 3, 3), 3);
  for (long ord : {1L, 2L, 4L}) {
    const auto rep = epsilon_transfer_check(t3, 1, 1, 1, ord, 1);
    EXPECT_TRUE(rep.passed()) << rep.params;
    EXPECT_EQ(rep.rows.size(), 2u);
  }
  const auto t2 = make_proximity(make_local_field(2, 2, 1, {}, 3), make_local_field(0, 2, 1, 3, 3), 3);
  const auto rep = epsilon_transfer_check(t2, 2, 1, 1);
  EXPECT_TRUE(rep.passed());
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.source.conductor, row.target.conductor);
    EXPECT_EQ(row.source.constant, row.target.constant);
  }
  EXPECT_THROW(epsilon_transfer_check(make_proximity(make_local_field(2, 2, 1, {}, 3),
                                                     make_local_field(0, 2, 1, 3, 3), 1),
                                      1, 1, 2),
               ConfigError);
}
