#include "pcfi/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "pcfi/errors.hpp"
#include "pcfi/report_json.hpp"
#include "pcfi/rng.hpp"

namespace pcfi {

std::string mask_digest(const MaskMatrix& mask) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int shift = 0; shift < 64; shift += 8) mix((static_cast<std::uint64_t>(mask.rows()) >> shift) & 0xff);
  for (int shift = 0; shift < 64; shift += 8) mix((static_cast<std::uint64_t>(mask.cols()) >> shift) & 0xff);
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index d = 0; d < mask.cols(); ++d) mix(mask(i, d) ? 1 : 0);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

PipelineReport run_pipeline(const Graph& g, const Eigen::Ref<const Matrix>& truth,
                            const PipelineConfig& config) {
  if (truth.rows() != g.num_nodes()) {
    throw InputError("pipeline: feature rows do not match the graph");
  }
  if (config.seeds.empty()) throw InputError("pipeline: no seeds given");
  if (config.methods.empty()) throw InputError("pipeline: no methods given");
  validate(config.imputation);

  PipelineReport report;
  report.config = config;
  for (auto seed : config.seeds) {
    const MaskMatrix known =
        make_mask({config.mask_kind, config.rate, seed}, truth.rows(), truth.cols());
    const FeatureSet fs = apply_mask(truth, known);
    SeedRun run;
    run.seed = seed;
    run.mask_digest = mask_digest(known);
    run.masked_entries = static_cast<std::size_t>((!known.array()).count());
    for (auto method : config.methods) {
      ImputationConfig ic = config.imputation;
      ic.method = method;
      auto result = impute(g, fs, ic);
      run.runs.push_back({method, evaluate(truth, result.imputed, known, &result.spds),
                          std::move(result.flagged_channels)});
    }
    report.seeds.push_back(std::move(run));
  }

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    std::vector<double> rmse;
    std::vector<double> cosine;
    std::vector<double> rho;
    for (const auto& run : report.seeds) {
      const auto& eval = run.runs[m].eval;
      rmse.push_back(eval.rmse);
      cosine.push_back(eval.mean_cosine);
      if (eval.bucket_spearman) rho.push_back(*eval.bucket_spearman);
    }
    MethodAggregate agg;
    agg.method = config.methods[m];
    std::tie(agg.rmse_mean, agg.rmse_std) = mean_std(rmse);
    std::tie(agg.cosine_mean, agg.cosine_std) = mean_std(cosine);
    if (!rho.empty()) agg.spearman_mean = mean_std(rho).first;
    report.aggregates.push_back(agg);
  }
  return report;
}

nlohmann::json to_json(const PipelineReport& report) {
  using nlohmann::json;
  const auto& cfg = report.config;
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(to_string(m));
  json seeds = json::array();
  for (const auto& run : report.seeds) {
    json runs = json::array();
    for (const auto& r : run.runs) {
      json eval = to_json(r.eval);
      eval["cosine"].erase("per_node");
      runs.push_back({{"method", to_string(r.method)},
                      {"flagged_channels", r.flagged_channels},
                      {"eval", std::move(eval)}});
    }
    seeds.push_back({{"seed", run.seed},
                     {"mask_digest", run.mask_digest},
                     {"masked_entries", run.masked_entries},
                     {"methods", std::move(runs)}});
  }
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"method", to_string(a.method)},
                          {"rmse_mean", json_number(a.rmse_mean)},
                          {"rmse_std", json_number(a.rmse_std)},
                          {"cosine_mean", json_number(a.cosine_mean)},
                          {"cosine_std", json_number(a.cosine_std)},
                          {"spearman_mean", json_number(a.spearman_mean)}});
  }
  json imputation = to_json(cfg.imputation);
  imputation.erase("method");
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "pipeline"},
          {"mask", {{"type", to_string(cfg.mask_kind)},
                    {"rate", cfg.rate},
                    {"rng", Rng::kAlgorithm}}},
          {"methods", std::move(methods)},
          {"imputation", std::move(imputation)},
          {"seeds", std::move(seeds)},
          {"aggregates", std::move(aggregates)}};
}

}  // namespace pcfi
