#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pcfi/diffusion.hpp"
#include "pcfi/graph.hpp"
#include "pcfi/masking.hpp"
#include "pcfi/propagation.hpp"
#include "pcfi/spds.hpp"

namespace pcfi {

enum class Method { kPcfi, kPcfiStage1Only, kFp, kZero };

std::string_view to_string(Method method);
Method parse_method(std::string_view s);

struct ImputationConfig {
  double alpha = 0.8;
  double beta = 1e-3;
  int steps = 100;
  std::optional<double> tolerance;
  Method method = Method::kPcfi;
  DiffusionMode mode = DiffusionMode::kIterative;
  bool lenient = false;
  std::optional<double> receiver_alpha;
};

// Throws InputError for out-of-range parameters.
void validate(const ImputationConfig& config);

nlohmann::json to_json(const ImputationConfig& config);

struct ImputationResult {
  Matrix imputed;
  SpdsMatrix spds;
  std::vector<int> flagged_channels;
  std::vector<int> steps_run;
  std::vector<double> residuals;
};

// Full imputation: SPD-S (one BFS when the mask is structural), then the
// selected method. kPcfi runs stage 1 followed by stage 2.
ImputationResult impute(const Graph& g, const FeatureSet& fs,
                        const ImputationConfig& config);

}  // namespace pcfi
