#include "pcfi/masking.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "pcfi/errors.hpp"
#include "pcfi/rng.hpp"

namespace pcfi {
namespace {

Eigen::Index missing_rows(const MaskMatrix& m) {
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) count += !m.row(i).any();
  return count;
}

TEST(MaskedCountTest, RoundsHalfUp) {
  EXPECT_EQ(masked_count(0.5, 4), 2);
  EXPECT_EQ(masked_count(0.5, 5), 3);
  EXPECT_EQ(masked_count(0.25, 16), 4);
  EXPECT_EQ(masked_count(0.995, 200), 199);
  EXPECT_EQ(masked_count(0.1, 4), 0);
}

TEST(StructuralMaskTest, HalfOfFourNodes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = structural_mask(4, 2, 0.5, seed);
    EXPECT_EQ(missing_rows(m), 2);
    EXPECT_EQ(m.count(), 4);
  }
}

TEST(StructuralMaskTest, Deterministic) {
  EXPECT_EQ(structural_mask(50, 3, 0.3, 9), structural_mask(50, 3, 0.3, 9));
  EXPECT_NE(structural_mask(50, 3, 0.3, 9), structural_mask(50, 3, 0.3, 10));
}

TEST(StructuralMaskTest, ExtremeRateLeavesOneSource) {
  const auto m = structural_mask(200, 4, 0.995, 1);
  EXPECT_EQ(missing_rows(m), 199);
  EXPECT_TRUE(is_structural(m));
}

TEST(StructuralMaskTest, RejectsBadRatesAndNoSources) {
  EXPECT_THROW(structural_mask(4, 2, 1.0, 0), InputError);
  EXPECT_THROW(structural_mask(4, 2, 0.0, 0), InputError);
  EXPECT_THROW(structural_mask(4, 2, -0.2, 0), InputError);
  EXPECT_THROW(structural_mask(4, 2, std::nan(""), 0), InputError);
  // round(0.9 * 4) = 4 masks every node.
  EXPECT_THROW(structural_mask(4, 2, 0.9, 0), InputError);
}

TEST(StructuralMaskTest, RowsAreConstant) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.uniform_index(100));
    const auto f = static_cast<Eigen::Index>(1 + rng.uniform_index(6));
    const double rate = 0.05 + 0.9 * rng.uniform01();
    if (masked_count(rate, n) >= n) continue;
    const auto m = structural_mask(n, f, rate, trial);
    EXPECT_TRUE(is_structural(m));
    EXPECT_EQ(missing_rows(m), masked_count(rate, n));
  }
}

TEST(UniformMaskTest, Counts) {
  EXPECT_EQ((!uniform_mask(2, 2, 0.5, 3).array()).count(), 2);
  EXPECT_EQ((!uniform_mask(4, 4, 0.25, 3).array()).count(), 4);
  EXPECT_THROW(uniform_mask(2, 2, 1.0, 0), InputError);
  EXPECT_THROW(uniform_mask(1, 1, 0.6, 0), InputError);
}

TEST(UniformMaskTest, FractionApproachesRate) {
  for (Eigen::Index n : {50, 100, 1000}) {
    const auto m = uniform_mask(n, 8, 0.995, 4);
    const double frac = static_cast<double>((!m.array()).count()) / (n * 8.0);
    EXPECT_LE(std::abs(frac - 0.995), 1.0 / (n * 8.0));
  }
}

// Per-entry inclusion frequency over many seeds; chi-square against the
// binomial expectation, loose bound at ~5 sigma of the statistic.
TEST(UniformMaskTest, EntriesAreEquallyLikely) {
  constexpr int kSeeds = 2000;
  constexpr Eigen::Index kN = 6;
  constexpr Eigen::Index kF = 5;
  constexpr double kRate = 0.4;  // 12 of 30 entries
  Eigen::ArrayXXd hits = Eigen::ArrayXXd::Zero(kN, kF);
  for (int s = 0; s < kSeeds; ++s) hits += (!uniform_mask(kN, kF, kRate, s).array()).cast<double>();
  const double expected = kSeeds * kRate;
  const double chi2 =
      ((hits - expected).square() / (expected * (1.0 - kRate))).sum();
  // 30 cells (29 dof): mean ~29, sd ~7.6.
  EXPECT_LT(chi2, 29 + 5 * 7.6);
}

TEST(UniformMaskTest, Deterministic) {
  EXPECT_EQ(uniform_mask(30, 7, 0.6, 5), uniform_mask(30, 7, 0.6, 5));
}

TEST(ApplyMaskTest, ZeroesUnknownEntries) {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  MaskMatrix known(2, 2);
  known << true, false, false, true;
  const auto fs = apply_mask(x, known);
  Matrix expected(2, 2);
  expected << 1, 0, 0, 4;
  EXPECT_EQ(fs.values, expected);
  EXPECT_EQ(x(0, 1), 2);  // input untouched
}

TEST(ApplyMaskTest, AllKnownIsIdentityAndColumnZeroing) {
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(apply_mask(x, MaskMatrix::Constant(3, 2, true)).values, x);
  MaskMatrix known = MaskMatrix::Constant(3, 2, true);
  known.col(1).setConstant(false);
  EXPECT_TRUE(apply_mask(x, known).values.col(1).isZero(0));
}

TEST(ApplyMaskTest, ShapeMismatch) {
  EXPECT_THROW(apply_mask(Matrix::Zero(2, 2), MaskMatrix::Constant(2, 3, true)),
               InputError);
}

TEST(MaskKindTest, Parse) {
  EXPECT_EQ(parse_mask_kind("structural"), MaskKind::kStructural);
  EXPECT_EQ(parse_mask_kind("uniform"), MaskKind::kUniform);
  EXPECT_THROW(parse_mask_kind("random"), InputError);
}

}  // namespace
}  // namespace pcfi
