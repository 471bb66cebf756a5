#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcfi/eval.hpp"
#include "pcfi/graph.hpp"
#include "pcfi/imputation.hpp"
#include "pcfi/masking.hpp"

namespace pcfi {

struct PipelineConfig {
  MaskKind mask_kind = MaskKind::kStructural;
  double rate = 0.9;
  std::vector<std::uint64_t> seeds{0};
  std::vector<Method> methods{Method::kPcfi, Method::kFp, Method::kZero};
  ImputationConfig imputation;  // method field ignored
};

struct MethodRun {
  Method method = Method::kPcfi;
  EvalReport eval;
  std::vector<int> flagged_channels;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::string mask_digest;  // FNV-1a over the row-major mask bits
  std::size_t masked_entries = 0;
  std::vector<MethodRun> runs;  // one per configured method, in order
};

struct MethodAggregate {
  Method method = Method::kPcfi;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  double cosine_mean = 0.0;
  double cosine_std = 0.0;
  std::optional<double> spearman_mean;
};

struct PipelineReport {
  PipelineConfig config;
  std::vector<SeedRun> seeds;
  std::vector<MethodAggregate> aggregates;
};

std::string mask_digest(const MaskMatrix& mask);

// For every seed: draw the mask, run each method, evaluate against `truth`
// with SPD-S buckets. Throws what the stages throw.
PipelineReport run_pipeline(const Graph& g, const Eigen::Ref<const Matrix>& truth,
                            const PipelineConfig& config);

nlohmann::json to_json(const PipelineReport& report);

}  // namespace pcfi
