#include "support.hpp"

using namespace kclose;
using namespace kclose::testing;

namespace {

ProximityTriple f2_to_char0(int e, int m, int N = 6) {
  return make_proximity(make_local_field(2, 2, 1, {}, N), make_local_field(0, 2, 1, e, N), m);
}

}  // namespace

TEST(SortedTuplesTest, Counts) {
  EXPECT_EQ(sorted_tuples(1, 0, 2).size(), 3u);
  EXPECT_EQ(sorted_tuples(2, 0, 2).size(), 6u);
  EXPECT_EQ(sorted_tuples(3, -1, 1).size(), 10u);
  EXPECT_TRUE(sorted_tuples(2, 2, 1).empty());
  for (const auto& a : sorted_tuples(3, 0, 3)) EXPECT_TRUE(nondecreasing(a));
}

TEST(TransferTest, LevelAboveClosenessIsRejected) {
  EXPECT_THROW(TransferContext(f2_to_char0(6, 2), 1, 1, 2, 3, 6), ConfigError);
  EXPECT_NO_THROW(TransferContext(f2_to_char0(6, 2), 1, 1, 2, 2, 6));
}

TEST(TransferTest, BelowTheBoundNeedsDiagnosticMode) {
  const TransferContext ctx(f2_to_char0(6, 2), 1, 1, 2, 1, 6);
  EXPECT_THROW(verify_transfer_hom(ctx, 0, 1), ConfigError);
  const TransferReport rep = verify_transfer_hom(ctx, 0, 1, true);
  EXPECT_TRUE(rep.diagnostic);
  EXPECT_EQ(rep.required_m, 3);
}

TEST(TransferTest, RankOneDegreeTwo) {
  const TransferContext ctx(f2_to_char0(6, 2), 2, 1, 1, 1, 12);
  const TransferReport rep = verify_transfer_hom(ctx, 0, 1);
  EXPECT_TRUE(rep.passed());
  EXPECT_FALSE(rep.diagnostic);
  EXPECT_EQ(rep.required_m, 2);
  EXPECT_GT(rep.keys, 0);
  EXPECT_EQ(rep.pairs_checked, rep.keys * rep.keys);
  EXPECT_EQ(rep.volumes_checked, rep.keys);
}

TEST(TransferTest, RankTwoDegreeOne) {
  const TransferContext ctx(f2_to_char0(6, 3), 1, 1, 2, 1, 6);
  const TransferReport rep = verify_transfer_hom(ctx, 0, 1);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.required_m, 3);
  EXPECT_EQ(rep.keys, 21);
}

TEST(TransferTest, ReverseDirection) {
  const TransferContext ctx(inverse(f2_to_char0(6, 3)), 1, 1, 2, 1, 6);
  EXPECT_TRUE(verify_transfer_hom(ctx, 0, 1).passed());
}

TEST(TransferTest, TransferOfHeckeElements) {
  const TransferContext ctx(f2_to_char0(6, 3), 1, 1, 2, 1, 6);
  const auto& F = ctx.source();
  const auto& L = ctx.target();
  EXPECT_EQ(ctx.transfer_hecke(h_fn(F, F.id())), h_fn(L, L.id()));
  EXPECT_EQ(ctx.transfer_hecke(h_fn(F, F.diag({0, 1}))), h_fn(L, L.diag({0, 1})));
  const HeckeElement f = hecke_add(h_fn(F, F.diag({0, 1})), hecke_scale(h_fn(F, F.diag({1, 1})), Rational(3)));
  EXPECT_EQ(ctx.transfer_hecke(convolve(F, f, f)),
            convolve(L, ctx.transfer_hecke(f), ctx.transfer_hecke(f)));
}

TEST(TransferTest, ReducedTraceAndNormTransferExhaustively) {
  for (int l = 1; l <= 2; ++l) {
    const auto t = f2_to_char0(2, 2, 4);
    const int d = 2;
    auto AF = make_algebra(t.source, d, 1), AL = make_algebra(t.target, d, 1);
    const int L = l * d;
    long checked = 0;
    for (const auto& dg : all_digit_vectors(AF->qE(), L)) {
      const DElem x = AF->from_digits(0, dg), y = AL->from_digits(0, dg);
      const Elem tx = reduced_trace(x), ty = reduced_trace(y);
      EXPECT_TRUE(congruent(lambda_truncated(t, AF->base()->truncate(tx, l)), AL->base()->truncate(ty, l), l));
      if (x.is_unit()) {
        const Elem nx = reduced_norm({{x}}), ny = reduced_norm({{y}});
        EXPECT_TRUE(is_close(AF->base()->truncate(nx, l), ny, l, t));
      }
      ++checked;
    }
    EXPECT_EQ(checked, 1L << (2 * L));
  }
}
