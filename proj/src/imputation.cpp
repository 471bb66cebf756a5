#include "pcfi/imputation.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "pcfi/errors.hpp"

namespace pcfi {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kPcfi:
      return "pcfi";
    case Method::kPcfiStage1Only:
      return "pcfi_stage1_only";
    case Method::kFp:
      return "fp";
    case Method::kZero:
      return "zero";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::kPcfi, Method::kPcfiStage1Only, Method::kFp, Method::kZero}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown method '" + std::string(s) +
                   "' (expected pcfi, pcfi_stage1_only, fp or zero)");
}

void validate(const ImputationConfig& config) {
  validate_alpha(config.alpha);
  if (config.receiver_alpha) validate_alpha(*config.receiver_alpha);
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw InputError("beta must be a finite value >= 0");
  }
  if (config.steps < 1) throw InputError("steps (K) must be at least 1");
  if (config.tolerance && !(*config.tolerance > 0.0)) {
    throw InputError("tolerance must be positive");
  }
}

nlohmann::json to_json(const ImputationConfig& config) {
  nlohmann::json j = {
      {"method", to_string(config.method)},
      {"alpha", config.alpha},
      {"beta", config.beta},
      {"steps", config.steps},
      {"mode", to_string(config.mode)},
      {"lenient_no_source", config.lenient},
  };
  j["tolerance"] = config.tolerance ? nlohmann::json(*config.tolerance) : nullptr;
  j["receiver_alpha"] =
      config.receiver_alpha ? nlohmann::json(*config.receiver_alpha) : nullptr;
  return j;
}

ImputationResult impute(const Graph& g, const FeatureSet& fs,
                        const ImputationConfig& config) {
  validate(config);
  if (fs.values.rows() != g.num_nodes() || fs.known.rows() != fs.values.rows() ||
      fs.known.cols() != fs.values.cols()) {
    std::ostringstream os;
    os << "features " << fs.values.rows() << "x" << fs.values.cols() << " and mask "
       << fs.known.rows() << "x" << fs.known.cols() << " do not fit a graph of "
       << g.num_nodes() << " nodes";
    throw InputError(os.str());
  }

  ImputationResult out;
  out.spds = compute_spds(g, fs.known,
                          is_structural(fs.known) ? SpdsMode::kStructural
                                                  : SpdsMode::kPerChannel);
  const auto f = static_cast<std::size_t>(fs.num_channels());

  switch (config.method) {
    case Method::kZero:
      out.imputed = fs.values;
      out.flagged_channels = sourceless_channels(out.spds);
      out.steps_run.assign(f, 0);
      out.residuals.assign(f, 0.0);
      return out;
    case Method::kFp: {
      auto fp = fp_baseline(g, fs, {config.steps, config.lenient});
      out.imputed = std::move(fp.imputed);
      out.flagged_channels = std::move(fp.flagged_channels);
      out.steps_run = std::move(fp.steps_run);
      out.residuals = std::move(fp.residuals);
      return out;
    }
    case Method::kPcfi:
    case Method::kPcfiStage1Only:
      break;
  }

  Stage1Config stage1{config.alpha, config.steps, config.tolerance, config.mode,
                      config.lenient};
  auto s1 = impute_stage1(g, fs, out.spds, stage1);
  out.flagged_channels = std::move(s1.flagged_channels);
  out.steps_run = std::move(s1.steps_run);
  out.residuals = std::move(s1.residuals);
  if (config.method == Method::kPcfi) {
    out.imputed = propagate_stage2(
        s1.imputed, out.spds, {config.alpha, config.beta, config.receiver_alpha});
  } else {
    out.imputed = std::move(s1.imputed);
  }
  return out;
}

}  // namespace pcfi
