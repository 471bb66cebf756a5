#include "pcfi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "pcfi/errors.hpp"
#include "pcfi/io.hpp"
#include "pcfi/report_json.hpp"

namespace pcfi {

double cosine_similarity(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                         const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

EvalReport evaluate(const Eigen::Ref<const Matrix>& truth,
                    const Eigen::Ref<const Matrix>& imputed, const MaskMatrix& known,
                    const SpdsMatrix* spds) {
  if (truth.rows() != imputed.rows() || truth.cols() != imputed.cols() ||
      known.rows() != truth.rows() || known.cols() != truth.cols()) {
    std::ostringstream os;
    os << "shape mismatch: truth " << truth.rows() << "x" << truth.cols() << ", imputed "
       << imputed.rows() << "x" << imputed.cols() << ", mask " << known.rows() << "x"
       << known.cols();
    throw InputError(os.str());
  }
  if (spds != nullptr &&
      (spds->num_nodes() != truth.rows() || spds->num_channels() != truth.cols())) {
    throw InputError("SPD-S shape does not match the feature matrix");
  }
  const auto n = truth.rows();
  const auto f = truth.cols();

  EvalReport report;
  double total_sq = 0.0;
  for (Eigen::Index d = 0; d < f; ++d) {
    double sq = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (known(i, d)) continue;
      const double diff = imputed(i, d) - truth(i, d);
      sq += diff * diff;
      ++count;
    }
    total_sq += sq;
    report.missing_entries += count;
    report.channel_rmse.push_back(count == 0 ? std::nullopt
                                             : std::optional(std::sqrt(sq / count)));
  }
  report.rmse = report.missing_entries == 0
                    ? 0.0
                    : std::sqrt(total_sq / static_cast<double>(report.missing_entries));

  std::map<std::int32_t, std::pair<std::size_t, double>> buckets;
  double cosine_sum = 0.0;
  report.node_cosine.assign(static_cast<std::size_t>(n), std::nullopt);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (known.row(i).all()) continue;
    const double tn = truth.row(i).norm();
    const double in = imputed.row(i).norm();
    if (tn == 0.0 || in == 0.0) {
      ++report.cosine_skipped;
      continue;
    }
    const double c = truth.row(i).dot(imputed.row(i)) / (tn * in);
    report.node_cosine[static_cast<std::size_t>(i)] = c;
    cosine_sum += c;
    ++report.cosine_nodes;
    if (spds != nullptr) {
      const auto row = spds->distances.row(i);
      if ((row.array() == kUnreachable).any()) continue;
      auto& bucket = buckets[row.maxCoeff()];
      ++bucket.first;
      bucket.second += c;
    }
  }
  report.mean_cosine =
      report.cosine_nodes == 0 ? 0.0 : cosine_sum / static_cast<double>(report.cosine_nodes);

  std::vector<double> keys;
  std::vector<double> means;
  for (const auto& [s, acc] : buckets) {
    const double mean = acc.second / static_cast<double>(acc.first);
    report.buckets.push_back({s, acc.first, mean});
    keys.push_back(s);
    means.push_back(mean);
  }
  if (spds != nullptr) report.bucket_spearman = spearman(keys, means);
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  using nlohmann::json;
  json channel = json::array();
  for (const auto& v : report.channel_rmse) channel.push_back(json_number(v));
  json nodes = json::array();
  for (const auto& v : report.node_cosine) nodes.push_back(json_number(v));
  json buckets = json::array();
  for (const auto& b : report.buckets) {
    buckets.push_back({{"spds", b.spds},
                       {"count", b.count},
                       {"mean_cosine", json_number(b.mean_cosine)}});
  }
  return {
      {"rmse", json_number(report.rmse)},
      {"missing_entries", report.missing_entries},
      {"channel_rmse", std::move(channel)},
      {"cosine",
       {{"mean", report.cosine_nodes == 0 ? json(nullptr) : json_number(report.mean_cosine)},
        {"nodes", report.cosine_nodes},
        {"skipped", report.cosine_skipped},
        {"per_node", std::move(nodes)}}},
      {"spds_buckets", std::move(buckets)},
      {"bucket_spearman", json_number(report.bucket_spearman)},
  };
}

}  // namespace pcfi
