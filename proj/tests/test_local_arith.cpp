#include "support.hpp"

using namespace kclose;
using namespace kclose::testing;

TEST(FieldSpecTest, RejectsBadParameters) {
  EXPECT_THROW(make_local_field(4, 4, 1, {}, 6), ConfigError);
  EXPECT_THROW(make_local_field(0, 4, 1, 2, 6), ConfigError);
  EXPECT_THROW(make_local_field(2, 2, 1, 3, 6), ConfigError);
  EXPECT_THROW(make_local_field(0, 2, 1, {}, 6), ConfigError);
  EXPECT_THROW(make_local_field(2, 2, 1, {}, 0), ConfigError);
  EXPECT_EQ(make_local_field(0, 2, 1, 4, 4), make_local_field(0, 2, 1, 4, 4));
  EXPECT_EQ(make_local_field(3, 3, 2, {}, 5).q(), 9);
}

TEST(LocalArithTest, CharacteristicTwoAddsToZero) {
  auto F = fq_t(2, 6);
  const Elem t = F->uniformizer_power(1, 5);
  EXPECT_TRUE((t + t).is_zero());
}

TEST(LocalArithTest, PFoldSumOfOneInMixedCharacteristic) {
  auto L = char0(2, 4, 4);
  Elem s = L->zero(4);
  for (int i = 0; i < 2; ++i) s = s + L->one(4);
  EXPECT_TRUE(s.is_zero() || s.valuation() >= 4);
  auto L6 = char0(2, 4, 8);
  Elem s6 = L6->one(8) + L6->one(8);
  EXPECT_EQ(s6.valuation(), 4);
}

TEST(LocalArithTest, InverseOfOnePlusT) {
  auto F = fq_t(2, 4);
  const Elem x = F->one(4) + F->uniformizer_power(1, 3);
  const Elem y = F->inv(x);
  EXPECT_EQ(y.valuation(), 0);
  EXPECT_EQ(residue_digits(y, 4), (std::vector<uint32_t>{1, 1, 1, 1}));
  EXPECT_TRUE(congruent(x * y, F->one(4), 4));
}

TEST(LocalArithTest, Valuations) {
  auto F = fq_t(3, 6);
  EXPECT_EQ(F->uniformizer_power(3, 2).valuation(), 3);
  EXPECT_TRUE(F->zero(6).is_zero());
  EXPECT_EQ(F->inv(F->uniformizer_power(2, 4)).valuation(), -2);
  EXPECT_THROW(F->inv(F->zero(6)), MathError);
}

class RingAxiomsTest : public ::testing::TestWithParam<FieldSpec> {};

TEST_P(RingAxiomsTest, AssociativeDistributiveAndValuative) {
  auto F = LocalField::make(GetParam());
  const int N = F->N();
  Rng g(derive_seed(7, GetParam().q() * 100 + F->e()));
  for (int i = 0; i < 200; ++i) {
    const Elem x = random_elem(g, *F, static_cast<int>(g() % 3), N);
    const Elem y = random_elem(g, *F, static_cast<int>(g() % 3), N);
    const Elem z = random_elem(g, *F, static_cast<int>(g() % 3), N);
    const int k = std::min({(x + y).precision(), N});
    EXPECT_TRUE(congruent((x + y) + z, x + (y + z), k));
    EXPECT_TRUE(congruent(x + y, y + x, k));
    EXPECT_TRUE(congruent(x * y, y * x, std::min(x.precision(), y.precision())));
    const Elem lhs = x * (y + z), rhs = x * y + x * z;
    EXPECT_TRUE(congruent(lhs, rhs, std::min(lhs.precision(), rhs.precision())));
    EXPECT_TRUE(congruent(x - x, F->zero(N), x.precision()));
    if (!x.is_zero() && !y.is_zero()) {
      EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
      const Elem s = x + y;
      if (!s.is_zero()) {
        EXPECT_GE(s.valuation(), std::min(x.valuation(), y.valuation()));
      }
      const Elem xi = F->inv(x);
      EXPECT_TRUE(congruent(x * xi, F->one(N), (x * xi).precision()));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, RingAxiomsTest,
                         ::testing::Values(make_local_field(2, 2, 1, {}, 8), make_local_field(3, 3, 1, {}, 6),
                                           make_local_field(2, 2, 2, {}, 5), make_local_field(0, 2, 1, 1, 8),
                                           make_local_field(0, 2, 1, 3, 7), make_local_field(0, 3, 1, 2, 6),
                                           make_local_field(0, 3, 2, 2, 6)));

TEST(LocalArithTest, TwoAdicIntegersMatchIntegerArithmetic) {
  auto L = char0(2, 1, 10);
  for (long a = -20; a <= 20; ++a)
    for (long b = -20; b <= 20; ++b) {
      EXPECT_TRUE(congruent(L->from_int(a, 10) * L->from_int(b, 10), L->from_int(a * b, 10), 10));
      EXPECT_TRUE(congruent(L->from_int(a, 10) + L->from_int(b, 10), L->from_int(a + b, 10), 10));
    }
  EXPECT_TRUE(congruent(L->from_int(3, 10) * L->inv(L->from_int(3, 10)), L->one(10), 10));
}

TEST(ExtensionTest, DegreeOneIsTheBase) {
  auto F = fq_t(2, 4);
  auto E = unramified_extension(F, 1);
  EXPECT_EQ(E->ext()->q(), 2);
  const Elem x = E->embed(F->one(4) + F->uniformizer_power(1, 3));
  EXPECT_EQ(E->frobenius_power(x, 1), x);
}

TEST(ExtensionTest, FrobeniusOnF4) {
  auto F = fq_t(2, 6);
  auto E = unramified_extension(F, 2);
  const auto& kE = E->ext()->residue();
  ASSERT_EQ(kE.q(), 4u);
  for (uint32_t a = 0; a < 4; ++a) {
    const Elem y = E->ext()->teich(a, 0, 4);
    EXPECT_EQ(E->frobenius_power(y, 1), E->ext()->teich(kE.mul(a, a), 0, 4));
    EXPECT_EQ(E->frobenius_power(y, 2), y);
  }
  EXPECT_EQ(E->frobenius_power(E->ext()->one(4), 1), E->ext()->one(4));
}

TEST(ExtensionTest, SigmaHasOrderDAndFixesBase) {
  for (int p : {2, 3})
    for (int d : {2, 3}) {
      auto F = fq_t(p, 5);
      auto E = unramified_extension(F, d);
      Rng g(derive_seed(p, d));
      for (int i = 0; i < 50; ++i) {
        const Elem x = random_elem(g, *E->ext(), 0, 5);
        EXPECT_EQ(E->frobenius_power(x, d), x);
        if (d > 1 && x != E->frobenius_power(x, 1)) {
          EXPECT_FALSE(E->in_base(x));
        }
        const Elem b = E->embed(random_elem(g, *F, 0, 5));
        EXPECT_EQ(E->frobenius_power(b, 1), b);
        EXPECT_TRUE(E->in_base(b));
      }
    }
}

namespace {

/// All monic degree-d divisors of X^{q^d-1} - 1 over O/P^m, by exhaustive search.
std::vector<Poly> monic_divisors(const LocalFieldPtr& F, int d, int m) {
  const long n = ipow(F->q(), d) - 1;
  const Poly target = x_pow_minus_one(F, n, m);
  std::vector<Poly> out;
  std::vector<std::vector<uint32_t>> coeffs = all_digit_vectors(F->q(), m);
  std::vector<size_t> pick(d, 0);
  while (true) {
    Poly P;
    for (int i = 0; i < d; ++i) P.push_back(F->from_digits(0, coeffs[pick[i]]));
    P.push_back(F->one(m));
    if (poly_zero_mod(poly_rem_monic(target, P), m)) out.push_back(P);
    int k = 0;
    while (k < d && ++pick[k] == coeffs.size()) pick[k++] = 0;
    if (k == d) break;
  }
  return out;
}

std::vector<uint32_t> reduction(const Poly& P) {
  std::vector<uint32_t> out;
  for (const auto& c : P) out.push_back(c.digit(0));
  return out;
}

}  // namespace

TEST(HenselTest, LinearFactorOverF2) {
  const Poly P = hensel_lift_factor(make_local_field(2, 2, 1, {}, 3), 1, 3);
  ASSERT_EQ(P.size(), 2u);
  auto F = P[0].field();
  EXPECT_TRUE(congruent(P[0], F->from_int(-1, 3), 3));
  EXPECT_TRUE(congruent(P[1], F->one(3), 3));
}

TEST(HenselTest, QuadraticFactorOverF2t) {
  const Poly P = hensel_lift_factor(make_local_field(2, 2, 1, {}, 3), 2, 3);
  ASSERT_EQ(P.size(), 3u);
  for (const auto& c : P) EXPECT_TRUE(congruent(c, c.field()->one(3), 3));
}

TEST(HenselTest, UniqueLiftByExhaustiveDivisorSearch) {
  for (int p : {2, 3})
    for (int d : {1, 2})
      for (int m = 1; m <= 3; ++m)
        for (bool equal_char : {true, false}) {
          const FieldSpec s = equal_char ? make_local_field(p, p, 1, {}, 3) : make_local_field(0, p, 1, 1, 3);
          auto F = LocalField::make(s);
          const auto want = residue_min_poly(*unramified_extension(F, d));
          int matches = 0;
          for (const auto& P : monic_divisors(F, d, m)) {
            if (reduction(P) != want) continue;
            ++matches;
            const Poly H = hensel_lift_factor(s, d, m);
            for (int i = 0; i <= d; ++i) EXPECT_TRUE(congruent(P[i], H[i], m)) << s.describe() << " d=" << d;
          }
          EXPECT_EQ(matches, 1) << s.describe() << " d=" << d << " m=" << m;
        }
}

TEST(ProximityTripleTest, ClosenessObstruction) {
  EXPECT_NO_THROW(make_proximity(make_local_field(2, 2, 1, {}, 6), make_local_field(0, 2, 1, 4, 6), 3));
  EXPECT_THROW(make_proximity(make_local_field(2, 2, 1, {}, 6), make_local_field(0, 2, 1, 1, 6), 2), ConfigError);
  EXPECT_THROW(make_proximity(make_local_field(2, 2, 1, {}, 6), make_local_field(3, 3, 1, {}, 6), 1), ConfigError);
  const FieldSpec s = make_local_field(3, 3, 1, {}, 5);
  EXPECT_NO_THROW(make_proximity(s, s, 5));
}

TEST(LambdaTest, BasicValues) {
  auto t = make_proximity(make_local_field(2, 2, 1, {}, 6), make_local_field(0, 2, 1, 4, 6), 3);
  EXPECT_TRUE(lambda_apply(t, t.source->zero(3)).is_zero());
  EXPECT_EQ(lambda_apply(t, t.source->one(3)), t.target->one(3));
  for (int i = -2; i <= 3; ++i)
    EXPECT_EQ(lambda_apply(t, t.source->uniformizer_power(i, 3)), t.target->uniformizer_power(i, 3));
  EXPECT_THROW(lambda_apply(t, t.source->one(5)), PrecisionError);
  Rng g(11);
  for (int i = 0; i < 100; ++i) {
    const Elem x = random_elem(g, *t.source, static_cast<int>(g() % 5) - 2, 6);
    if (x.is_zero()) continue;
    EXPECT_EQ(lambda_truncated(t, x).valuation(), x.valuation());
  }
}

TEST(LambdaTest, RingIsomorphismModPm) {
  for (int p : {2, 3})
    for (int m = 1; m <= 3; ++m) {
      auto t = make_proximity(make_local_field(p, p, 1, {}, m), make_local_field(0, p, 1, m, m), m);
      const auto all = all_digit_vectors(p, m);
      for (const auto& a : all)
        for (const auto& b : all) {
          const Elem x = t.source->from_digits(0, a), y = t.source->from_digits(0, b);
          const Elem lx = lambda_formal(t, x), ly = lambda_formal(t, y);
          EXPECT_TRUE(congruent(lambda_formal(t, x + y), lx + ly, m));
          EXPECT_TRUE(congruent(lambda_formal(t, x * y), lx * ly, m));
        }
    }
}

TEST(LambdaTest, DigitTransportIsNotAdditiveBeyondTheClosenessLevel) {
  auto F = fq_t(2, 2);
  auto L = char0(2, 1, 2);
  const ProximityTriple t{2, F, L};
  const Elem one = F->one(2);
  const Elem lhs = lambda_formal(t, one + one);
  const Elem rhs = lambda_formal(t, one) + lambda_formal(t, one);
  EXPECT_TRUE(lhs.is_zero());
  EXPECT_EQ(rhs.valuation(), 1);
  EXPECT_FALSE(congruent(lhs, rhs, 2));
}

TEST(IsCloseTest, Examples) {
  auto t = make_proximity(make_local_field(2, 2, 1, {}, 6), make_local_field(0, 2, 1, 4, 6), 3);
  const Elem a = t.source->uniformizer_power(1, 5);
  const Elem piL = t.target->uniformizer_power(1, 5);
  const Elem b = piL * (t.target->one(5) + t.target->uniformizer_power(2, 3));
  EXPECT_TRUE(is_close(a, b, 2, t));
  EXPECT_FALSE(is_close(a, b, 3, t));
  EXPECT_TRUE(is_close(t.source->zero(5), t.target->zero(5), 2, t));
  EXPECT_FALSE(is_close(a, t.target->zero(5), 1, t));
  EXPECT_THROW(is_close(a, b, 4, t), ConfigError);
  Rng g(5);
  for (int i = 0; i < 50; ++i) {
    const Elem x = random_elem(g, *t.source, static_cast<int>(g() % 3), 6);
    if (x.is_zero()) continue;
    for (int l = 1; l <= std::min(3, x.rel_precision()); ++l) EXPECT_TRUE(is_close(x, lambda_formal(t, x), l, t));
  }
}

TEST(IsCloseTest, ProductsOfCloseElementsAreClose) {
  auto t = make_proximity(make_local_field(3, 3, 1, {}, 8), make_local_field(0, 3, 1, 4, 8), 4);
  Rng g(17);
  auto perturb = [&](const Elem& a, int l) {
    return lambda_formal(t, a) + random_elem(g, *t.target, a.valuation() + l, 8);
  };
  for (int i = 0; i < 200; ++i) {
    const int l = 1 + static_cast<int>(g() % 3);
    const Elem a1 = t.source->teich(1 + g() % 2, static_cast<int>(g() % 3), 7) + random_elem(g, *t.source, 3, 8);
    const Elem a2 = t.source->teich(1 + g() % 2, static_cast<int>(g() % 3), 7) + random_elem(g, *t.source, 3, 8);
    const Elem b1 = perturb(a1, l), b2 = perturb(a2, l);
    ASSERT_TRUE(is_close(a1, b1, l, t));
    ASSERT_TRUE(is_close(a2, b2, l, t));
    EXPECT_TRUE(is_close(a1 * a2, b1 * b2, l, t));
  }
}

TEST(IsCloseTest, SumsAtTheShiftedLevel) {
  auto t = make_proximity(make_local_field(3, 3, 1, {}, 10), make_local_field(0, 3, 1, 5, 10), 5);
  Rng g(23);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const int l = 1 + static_cast<int>(g() % 2);
    std::vector<Elem> a, b;
    for (int j = 0; j < 3; ++j) a.push_back(random_elem(g, *t.source, static_cast<int>(g() % 2), 10));
    Elem s = t.source->zero(10);
    for (const auto& x : a) s = s + x;
    if (s.is_zero()) continue;
    int lp;
    try {
      lp = sum_proximity_level(a, l);
    } catch (const MathError&) {
      continue;
    }
    int top = s.valuation() + l;
    for (const auto& x : a)
      if (!x.is_zero()) top = std::max(top, x.valuation() + lp);
    if (lp > t.m || top > 10) continue;
    Elem sb = t.target->zero(10);
    for (const auto& x : a) {
      if (x.is_zero()) {
        b.push_back(t.target->zero(10));
        continue;
      }
      b.push_back(lambda_formal(t, x) + random_elem(g, *t.target, x.valuation() + lp, 10));
      ASSERT_TRUE(is_close(x, b.back(), lp, t));
    }
    for (const auto& y : b) sb = sb + y;
    EXPECT_TRUE(is_close(s, sb, l, t));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}
