#include "pcfi/eval.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "pcfi/errors.hpp"
#include "support/test_support.hpp"

namespace pcfi {
namespace {

TEST(EvaluateTest, PerfectImputation) {
  Rng rng(51);
  const Matrix truth = testing::random_matrix(20, 4, rng);
  const MaskMatrix known = structural_mask(20, 4, 0.5, 1);
  const auto r = evaluate(truth, truth, known);
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.missing_entries, 40u);
  EXPECT_EQ(r.cosine_nodes, 10u);
  EXPECT_NEAR(r.mean_cosine, 1.0, 1e-12);
  for (std::size_t i = 0; i < 20; ++i) {
    if (known.row(static_cast<Eigen::Index>(i)).all()) {
      EXPECT_FALSE(r.node_cosine[i].has_value());
    } else {
      EXPECT_NEAR(*r.node_cosine[i], 1.0, 1e-12);
    }
  }
}

TEST(EvaluateTest, ZeroImputationSkipsCosine) {
  Matrix truth = Matrix::Ones(4, 2);
  MaskMatrix known = MaskMatrix::Constant(4, 2, true);
  known.row(1).setConstant(false);
  known.row(3).setConstant(false);
  Matrix imputed = truth;
  imputed.row(1).setZero();
  imputed.row(3).setZero();
  const auto r = evaluate(truth, imputed, known);
  EXPECT_EQ(r.cosine_skipped, 2u);
  EXPECT_EQ(r.cosine_nodes, 0u);
  EXPECT_DOUBLE_EQ(r.rmse, 1.0);
}

TEST(EvaluateTest, RmseOnlyOverMissingEntries) {
  Matrix truth(2, 2);
  truth << 1, 2, 3, 4;
  Matrix imputed(2, 2);
  imputed << 100, 2, 3, 6;  // the known (0,0) error must be ignored
  MaskMatrix known(2, 2);
  known << true, false, true, false;
  const auto r = evaluate(truth, imputed, known);
  EXPECT_DOUBLE_EQ(r.rmse, std::sqrt(2.0));
  ASSERT_EQ(r.channel_rmse.size(), 2u);
  EXPECT_FALSE(r.channel_rmse[0].has_value());
  EXPECT_DOUBLE_EQ(*r.channel_rmse[1], std::sqrt(2.0));
}

TEST(EvaluateTest, BucketsBySpds) {
  Matrix truth(4, 2);
  truth << 1, 0, 1, 0, 1, 0, 1, 0;
  Matrix imputed(4, 2);
  imputed << 1, 0, 1, 0, 1, 1, 0, 1;  // cos 1, 1/sqrt2, 0
  MaskMatrix known(4, 2);
  known << true, true, false, false, false, false, false, false;
  SpdsMatrix s{IntMatrix(4, 2)};
  s.distances << 0, 0, 1, 1, 2, 2, 3, 3;
  const auto r = evaluate(truth, imputed, known, &s);
  ASSERT_EQ(r.buckets.size(), 3u);
  EXPECT_EQ(r.buckets[0].spds, 1);
  EXPECT_DOUBLE_EQ(r.buckets[0].mean_cosine, 1.0);
  EXPECT_DOUBLE_EQ(r.buckets[1].mean_cosine, 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.buckets[2].mean_cosine, 0.0);
  ASSERT_TRUE(r.bucket_spearman.has_value());
  EXPECT_DOUBLE_EQ(*r.bucket_spearman, -1.0);
  EXPECT_TRUE(to_json(r).contains("spds_buckets"));
}

TEST(EvaluateTest, ShapeMismatch) {
  EXPECT_THROW(evaluate(Matrix::Zero(2, 2), Matrix::Zero(2, 3),
                        MaskMatrix::Constant(2, 2, false)),
               InputError);
}

TEST(CosineTest, Values) {
  Eigen::RowVectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 3;
  EXPECT_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a * 5), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, -a), -1.0);
}

TEST(SpearmanTest, TiesAndDegenerateInputs) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(*spearman(x, std::vector<double>{10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(*spearman(x, std::vector<double>{4, 3, 2, 1}), -1.0);
  // ranks (1.5, 1.5, 3, 4) against (1, 2, 3, 4)
  EXPECT_NEAR(*spearman(std::vector<double>{5, 5, 6, 7}, x), 0.9486832980505138, 1e-12);
  EXPECT_FALSE(spearman(std::vector<double>{1}, std::vector<double>{1}).has_value());
  EXPECT_FALSE(spearman(x, std::vector<double>{2, 2, 2, 2}).has_value());
  EXPECT_THROW(spearman(x, std::vector<double>{1}), InputError);
}

}  // namespace
}  // namespace pcfi
