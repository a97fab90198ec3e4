#include "support.hpp"

using namespace kclose;
using namespace kclose::testing;

namespace {

::testing::AssertionResult emat_congruent(const EMatrix& a, const EMatrix& b, int k) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) {
      const Elem diff = a[i][j] - b[i][j];
      if (!diff.is_zero() && diff.valuation() < k)
        return ::testing::AssertionFailure() << "entry (" << i << "," << j << ") differs at valuation "
                                             << diff.valuation();
    }
  return ::testing::AssertionSuccess();
}

int min_prec(const Elem& a, const Elem& b) { return std::min(a.precision(), b.precision()); }

struct AlgebraCase {
  int p, d, h;
  bool equal_char;
};

AlgebraPtr algebra_of(const AlgebraCase& c, int N) {
  return make_algebra(c.equal_char ? fq_t(c.p, N) : char0(c.p, N, N), c.d, c.h);
}

}  // namespace

TEST(CyclicAlgebraTest, RejectsNonDivisionInvariants) {
  auto F = fq_t(2, 4);
  EXPECT_THROW(make_algebra(F, 4, 2), ConfigError);
  EXPECT_THROW(make_algebra(F, 0, 1), ConfigError);
  EXPECT_NO_THROW(make_algebra(F, 3, 2));
  EXPECT_EQ(make_algebra(F, 3, -1)->h(), 2);
}

TEST(CyclicAlgebraTest, PiDToTheDIsPiF) {
  for (int d : {1, 2, 3}) {
    auto A = make_algebra(fq_t(3, 6), d, 1);
    DElem x = A->one(12);
    for (int i = 0; i < d; ++i) x = x * A->pi_power(1, 12);
    EXPECT_TRUE(delem_congruent(x, A->from_F(A->base()->uniformizer_power(1, 6)), 12)) << "d=" << d;
    EXPECT_EQ(A->pi_power(1, 12).valuation(), 1);
    EXPECT_EQ(A->from_F(A->base()->uniformizer_power(1, 6)).valuation(), d);
  }
}

TEST(CyclicAlgebraTest, ConjugationByPiDIsSigma) {
  for (int h : {1, 2}) {
    auto A = make_algebra(fq_t(2, 6), 3, h);
    const DElem pi = A->pi_power(1, 15), pinv = A->inv(pi);
    const auto& kE = A->E()->residue();
    for (uint32_t a = 1; a < kE.q(); ++a) {
      const Elem e = A->E()->teich(a, 0, 5);
      const DElem lhs = pinv * A->from_E(e) * pi;
      const DElem rhs = A->from_E(A->E()->teich(kE.frob(a, h), 0, 5));
      EXPECT_TRUE(delem_congruent(lhs, rhs, 12)) << "a=" << a << " h=" << h;
      if (kE.frob(a, 1) != a) {
        EXPECT_NE(pi * A->from_E(e), A->from_E(e) * pi);
      }
    }
  }
}

TEST(CyclicAlgebraTest, DigitsRoundTrip) {
  auto A = make_algebra(fq_t(2, 6), 2, 1);
  Rng g(3);
  for (int i = 0; i < 50; ++i) {
    const int val = static_cast<int>(g() % 5) - 2;
    std::vector<uint32_t> dg(7);
    for (auto& x : dg) x = random_residue(g, A->qE());
    const DElem x = A->from_digits(val, dg);
    for (int t = 0; t < 7; ++t) EXPECT_EQ(x.digit(val + t), dg[t]);
    EXPECT_EQ(x.precision(), val + 7);
  }
}

TEST(CyclicAlgebraTest, PsiOfPiD) {
  auto A = make_algebra(fq_t(2, 6), 2, 1);
  const EMatrix X = psi_embed({{A->pi_power(1, 10)}});
  ASSERT_EQ(X.size(), 2u);
  const auto& E = A->E();
  EXPECT_TRUE(X[0][0].is_zero());
  EXPECT_TRUE(X[1][1].is_zero());
  EXPECT_TRUE(congruent(X[0][1], E->uniformizer_power(1, 4), 5));
  EXPECT_TRUE(congruent(X[1][0], E->one(4), 4));
}

TEST(CyclicAlgebraTest, CharpolyOfPiD) {
  for (int d : {2, 3}) {
    auto A = make_algebra(fq_t(3, 6), d, 1);
    const Poly cp = reduced_charpoly({{A->pi_power(1, 6 * d)}});
    ASSERT_EQ(cp.size(), static_cast<size_t>(d + 1));
    EXPECT_TRUE(congruent(cp[0], -A->base()->uniformizer_power(1, 4), 5));
    for (int i = 1; i < d; ++i) EXPECT_TRUE(cp[i].is_zero() || cp[i].valuation() >= 5);
    EXPECT_TRUE(congruent(cp[d], A->base()->one(5), 5));
  }
}

class AlgebraPropertyTest : public ::testing::TestWithParam<AlgebraCase> {};

TEST_P(AlgebraPropertyTest, RingAxiomsAndInverses) {
  const int N = 5;
  auto A = algebra_of(GetParam(), N);
  const int P = A->d() * N;
  Rng g(derive_seed(GetParam().p * 10 + GetParam().d, GetParam().h));
  for (int i = 0; i < 60; ++i) {
    const DElem x = random_delem(g, A, static_cast<int>(g() % 3), P);
    const DElem y = random_delem(g, A, static_cast<int>(g() % 3), P);
    const DElem z = random_delem(g, A, 0, P);
    EXPECT_TRUE(delem_congruent((x * y) * z, x * (y * z), P));
    EXPECT_TRUE(delem_congruent(x * (y + z), x * y + x * z, P));
    EXPECT_TRUE(delem_congruent((y + z) * x, y * x + z * x, P));
    if (x.is_zero() || y.is_zero()) continue;
    EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
    const DElem xi = A->inv(x);
    EXPECT_EQ(xi.valuation(), -x.valuation());
    const int k = P - x.valuation();
    EXPECT_TRUE(delem_congruent(x * xi, A->one(P), k));
    EXPECT_TRUE(delem_congruent(xi * x, A->one(P), k));
  }
}

TEST_P(AlgebraPropertyTest, PsiIsMultiplicativeAndComputesTrd) {
  const int N = 5;
  auto A = algebra_of(GetParam(), N);
  const int P = A->d() * N;
  Rng g(derive_seed(GetParam().p * 100 + GetParam().d, GetParam().h));
  const Elem zero = A->E()->zero(kInfVal / 2);
  for (int i = 0; i < 60; ++i) {
    const DElem x = random_delem(g, A, 0, P), y = random_delem(g, A, 0, P);
    const EMatrix X = psi_embed({{x}}), Y = psi_embed({{y}}), XY = psi_embed({{x * y}});
    EXPECT_TRUE(emat_congruent(mat_mul(X, Y, zero), XY, N - 1));
    EXPECT_TRUE(emat_congruent(mat_add(X, Y), psi_embed({{x + y}}), N - 1));

    const Elem trd = reduced_trace(x);
    Elem direct = A->E()->zero(N);
    for (int j = 0; j < A->d(); ++j) direct = direct + A->sigma(x.component(0), j);
    const Elem via_psi = mat_trace(X, zero);
    EXPECT_TRUE(congruent(A->ext()->embed(trd), direct, min_prec(trd, direct)));
    EXPECT_TRUE(congruent(A->ext()->embed(trd), via_psi, std::min(N, via_psi.precision())));
    const Elem t_xy = reduced_trace(x * y), t_yx = reduced_trace(y * x);
    EXPECT_TRUE(congruent(t_xy, t_yx, min_prec(t_xy, t_yx)));
  }
}

TEST_P(AlgebraPropertyTest, ReducedNormIsMultiplicativeWithValuationVD) {
  const int N = 5;
  auto A = algebra_of(GetParam(), N);
  const int P = A->d() * N;
  Rng g(derive_seed(GetParam().p * 1000 + GetParam().d, GetParam().h));
  for (int i = 0; i < 30; ++i) {
    const DElem x = random_delem(g, A, static_cast<int>(g() % 3), P);
    const DElem y = random_delem(g, A, 0, P);
    if (x.is_zero() || y.is_zero()) continue;
    const Elem nx = reduced_norm({{x}}), ny = reduced_norm({{y}}), nxy = reduced_norm({{x * y}});
    EXPECT_EQ(nx.valuation(), x.valuation());
    const Elem prod = nx * ny;
    const int k = std::min(prod.precision(), nxy.precision());
    EXPECT_TRUE(congruent(prod, nxy, std::min(k, N - 1)));
  }
}

INSTANTIATE_TEST_SUITE_P(Algebras, AlgebraPropertyTest,
                         ::testing::Values(AlgebraCase{2, 1, 0, true}, AlgebraCase{2, 2, 1, true},
                                           AlgebraCase{3, 2, 1, true}, AlgebraCase{2, 3, 1, true},
                                           AlgebraCase{2, 3, 2, true}, AlgebraCase{2, 2, 1, false},
                                           AlgebraCase{3, 2, 1, false}));

TEST(CyclicAlgebraTest, MatrixReducedNormIsMultiplicative) {
  auto A = make_algebra(fq_t(2, 5), 2, 1);
  Rng g(41);
  for (int i = 0; i < 10; ++i) {
    const DMatrix M = random_GL_O(g, A, 2, 10), N = random_GL_O(g, A, 2, 10);
    const Elem a = reduced_norm(M), b = reduced_norm(N), ab = reduced_norm(dmul(M, N));
    EXPECT_EQ(a.valuation(), 0);
    EXPECT_TRUE(congruent(a * b, ab, 4));
  }
}
