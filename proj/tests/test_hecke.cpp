#include "support.hpp"

using namespace kclose;
using namespace kclose::testing;

namespace {

struct Cell {
  int p, d, r;
};

class HeckeCellTest : public ::testing::TestWithParam<Cell> {
 protected:
  HeckeCellTest()
      : A(make_algebra(fq_t(GetParam().p, 6), GetParam().d, 1)), ctx(A, GetParam().r, 1, 6 * GetParam().d) {}
  AlgebraPtr A;
  LevelContext ctx;
};

DMatrix swap_matrix(const AlgebraPtr& A, int prec) {
  DMatrix w = identity(A, 2, prec);
  std::swap(w[0], w[1]);
  return w;
}

}  // namespace

TEST_P(HeckeCellTest, UnitAndDiagonalProducts) {
  const HeckeElement unit = h_fn(ctx, ctx.id());
  const auto tuples = sorted_tuples(ctx.r(), 0, 2);
  for (const auto& a : tuples) {
    const HeckeElement ha = h_fn(ctx, ctx.diag(a));
    EXPECT_EQ(convolve(ctx, unit, ha), ha);
    EXPECT_EQ(convolve(ctx, ha, unit), ha);
    for (const auto& b : tuples) {
      if (a[0] + b[0] > 1 && ctx.r() > 1) continue;
      std::vector<int> ab(a.size());
      for (size_t i = 0; i < a.size(); ++i) ab[i] = a[i] + b[i];
      EXPECT_EQ(convolve(ctx, ha, h_fn(ctx, ctx.diag(b))), h_fn(ctx, ctx.diag(ab)));
    }
  }
}

TEST_P(HeckeCellTest, IntegralIsMultiplicative) {
  Rng g(derive_seed(GetParam().p * 10 + GetParam().d, GetParam().r));
  const auto small = sorted_tuples(ctx.r(), 0, 1);
  auto draw = [&] {
    const DMatrix B = random_GL_O(g, A, ctx.r(), ctx.prec()), C = random_GL_O(g, A, ctx.r(), ctx.prec());
    return indicator(ctx, dmul(dmul(B, ctx.diag(small[g() % small.size()])), mat_pad(mat_inv(C), ctx.prec())));
  };
  for (int i = 0; i < 4; ++i) {
    const HeckeElement f = draw(), h = draw();
    EXPECT_EQ(hecke_integral(ctx, convolve(ctx, f, h)), hecke_integral(ctx, f) * hecke_integral(ctx, h));
  }
}

TEST_P(HeckeCellTest, AssociativityOnSampledIndicators) {
  Rng g(derive_seed(GetParam().p * 1000 + GetParam().d, GetParam().r));
  const auto small = sorted_tuples(ctx.r(), 0, 1);
  auto draw = [&] {
    const DMatrix B = random_GL_O(g, A, ctx.r(), ctx.prec()), C = random_GL_O(g, A, ctx.r(), ctx.prec());
    return indicator(ctx, dmul(dmul(B, ctx.diag(small[g() % small.size()])), mat_pad(mat_inv(C), ctx.prec())));
  };
  for (int i = 0; i < 3; ++i) {
    const HeckeElement x = draw(), y = draw(), z = draw();
    EXPECT_EQ(convolve(ctx, convolve(ctx, x, y), z), convolve(ctx, x, convolve(ctx, y, z)));
  }
}

TEST_P(HeckeCellTest, GeneratorFactorization) {
  for (const auto& a : sorted_tuples(ctx.r(), -1, 2)) {
    HeckeElement prod = h_fn(ctx, ctx.id());
    for (int i : factor_diagonal(a)) prod = convolve(ctx, prod, h_fn(ctx, ctx.diag(generator_exponents(ctx.r(), i))));
    EXPECT_EQ(prod, h_fn(ctx, ctx.diag(a)));
  }
}

INSTANTIATE_TEST_SUITE_P(Cells, HeckeCellTest,
                         ::testing::Values(Cell{2, 1, 1}, Cell{2, 1, 2}, Cell{2, 2, 1}, Cell{2, 2, 2}, Cell{3, 1, 1},
                                           Cell{3, 1, 2}, Cell{3, 2, 1}));

TEST(HeckeTest, IndicatorSquare) {
  auto A = make_algebra(fq_t(2, 6), 1, 1);
  const LevelContext ctx(A, 2, 1, 6);
  const HeckeElement x = indicator(ctx, ctx.diag({0, 1}));
  EXPECT_EQ(convolve(ctx, x, x), hecke_scale(indicator(ctx, ctx.diag({0, 2})), Rational(1, 6)));
  EXPECT_EQ(hecke_integral(ctx, x), Rational(1, 3));
  EXPECT_EQ(hecke_integral(ctx, h_fn(ctx, ctx.diag({0, 2}))), Rational(4));
}

TEST(HeckeTest, NotCommutative) {
  auto A = make_algebra(fq_t(2, 6), 1, 1);
  const LevelContext ctx(A, 2, 1, 6);
  const HeckeElement w = h_fn(ctx, swap_matrix(A, 6)), a = h_fn(ctx, ctx.diag({0, 1}));
  EXPECT_NE(convolve(ctx, w, a), convolve(ctx, a, w));
  EXPECT_EQ(convolve(ctx, w, w), h_fn(ctx, ctx.id()));
}

TEST(HeckeTest, KazhdanBoundIsEnforced) {
  auto A = make_algebra(fq_t(2, 6), 2, 1);
  const LevelContext ctx(A, 2, 1, 12);
  const HeckeElement a = h_fn(ctx, ctx.diag({0, 3}));
  EXPECT_EQ(convolution_bound(a, a, 2), 1 + 3);
  EXPECT_THROW(convolve(ctx, a, a, 3), PrecisionError);
  EXPECT_EQ(kazhdan_bound(1, 2, {{0, 3}, {1, 1}}), 3);
  EXPECT_EQ(kazhdan_bound(2, 1, {}), 2);
}

TEST(HeckeTest, LevelMismatch) {
  auto A = make_algebra(fq_t(2, 6), 1, 1);
  const LevelContext ctx1(A, 1, 1, 6), ctx2(A, 1, 2, 6);
  const HeckeElement x = h_fn(ctx2, ctx2.id());
  EXPECT_THROW(convolve(ctx1, x, x), ConfigError);
  EXPECT_THROW(hecke_add(x, h_fn(ctx1, ctx1.id())), ConfigError);
}

TEST(HeckeTest, LinearStructure) {
  auto A = make_algebra(fq_t(3, 6), 1, 1);
  const LevelContext ctx(A, 2, 1, 6);
  const HeckeElement a = h_fn(ctx, ctx.diag({0, 1})), b = h_fn(ctx, ctx.diag({0, 0}));
  const HeckeElement s = hecke_add(a, hecke_scale(b, Rational(-2)));
  EXPECT_EQ(s.terms.size(), 2u);
  EXPECT_TRUE(hecke_add(a, hecke_scale(a, Rational(-1))).terms.empty());
  EXPECT_TRUE(hecke_scale(a, Rational(0)).terms.empty());
  EXPECT_EQ(convolve(ctx, s, s), hecke_add(hecke_add(convolve(ctx, a, a), hecke_scale(a, Rational(-4))),
                                           hecke_scale(b, Rational(4))));
}

TEST(HeckeTest, FactorDiagonal) {
  EXPECT_EQ(factor_diagonal({0, 1}), (std::vector<int>{1, 2}));
  EXPECT_EQ(factor_diagonal({-2, 0}), (std::vector<int>{-1, -1, 1, 1}));
  EXPECT_EQ(factor_diagonal({1, 1, 2}), (std::vector<int>{0, 2, 3}));
  EXPECT_THROW(factor_diagonal({1, 0}), ConfigError);
  EXPECT_EQ(generator_exponents(3, 1), (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(generator_exponents(2, -1), (std::vector<int>{-1, -1}));
}

TEST(HeckeTest, GeneratorFamilyShape) {
  auto A = make_algebra(fq_t(2, 6), 1, 1);
  const LevelContext ctx(A, 2, 1, 6);
  const GeneratorFamily g = generator_family(ctx);
  EXPECT_EQ(g.units.size(), 6u);
  EXPECT_EQ(g.diagonals.size(), 4u);
  std::set<DoubleCosetKey> keys;
  for (const auto& u : g.units) keys.insert(u.terms.begin()->first);
  EXPECT_EQ(keys.size(), 6u);
}

TEST(HeckeTest, SuiteOnSmallCell) {
  const auto rep = hecke_suite(make_local_field(2, 2, 1, {}, 6), 1, 2, 1, 0, 2, 3, 1);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.checks, 20);
}
