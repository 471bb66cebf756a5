#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "pcfi/spds.hpp"
#include "pcfi/types.hpp"

namespace pcfi {

struct SpdsBucket {
  std::int32_t spds = 0;
  std::size_t count = 0;
  double mean_cosine = 0.0;
};

// Recovery metrics against ground truth. Only unobserved entries enter the
// RMSE; only nodes with at least one unobserved entry enter the cosine
// statistics.
struct EvalReport {
  double rmse = 0.0;
  std::size_t missing_entries = 0;
  std::vector<std::optional<double>> channel_rmse;  // empty when nothing missing

  std::vector<std::optional<double>> node_cosine;   // per node
  double mean_cosine = 0.0;
  std::size_t cosine_nodes = 0;
  std::size_t cosine_skipped = 0;  // zero-norm truth or imputed row

  // Nodes grouped by the largest SPD-S over their channels; filled only when
  // SPD-S is supplied. Nodes with an unreachable channel are left out.
  std::vector<SpdsBucket> buckets;
  std::optional<double> bucket_spearman;
};

// Throws InputError on shape mismatch.
EvalReport evaluate(const Eigen::Ref<const Matrix>& truth,
                    const Eigen::Ref<const Matrix>& imputed,
                    const MaskMatrix& known, const SpdsMatrix* spds = nullptr);

double cosine_similarity(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                         const Eigen::Ref<const Eigen::RowVectorXd>& b);

// Spearman rank correlation with average ranks for ties. Returns nullopt for
// fewer than two points or a constant input.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

nlohmann::json to_json(const EvalReport& report);

}  // namespace pcfi
