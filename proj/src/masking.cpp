#include "pcfi/masking.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "pcfi/errors.hpp"
#include "pcfi/rng.hpp"

namespace pcfi {
namespace {

void validate_rate(double rate) {
  if (!(rate > 0.0 && rate < 1.0)) {
    std::ostringstream os;
    os << "missing rate must lie in (0, 1), got " << rate;
    throw InputError(os.str());
  }
}

}  // namespace

std::string_view to_string(MaskKind kind) {
  return kind == MaskKind::kStructural ? "structural" : "uniform";
}

MaskKind parse_mask_kind(std::string_view s) {
  if (s == "structural") return MaskKind::kStructural;
  if (s == "uniform") return MaskKind::kUniform;
  throw InputError("unknown mask type '" + std::string(s) + "'");
}

std::int64_t masked_count(double rate, std::int64_t total) {
  return static_cast<std::int64_t>(std::floor(rate * static_cast<double>(total) + 0.5));
}

MaskMatrix structural_mask(Eigen::Index num_nodes, Eigen::Index num_channels,
                           double rate, std::uint64_t seed) {
  validate_rate(rate);
  const auto count = masked_count(rate, num_nodes);
  if (count >= num_nodes) {
    throw InputError("structural mask would hide every node; no source remains");
  }
  MaskMatrix known = MaskMatrix::Constant(num_nodes, num_channels, true);
  Rng rng(seed);
  for (auto v : sample_without_replacement(num_nodes, count, rng)) {
    known.row(static_cast<Eigen::Index>(v)).setConstant(false);
  }
  return known;
}

MaskMatrix uniform_mask(Eigen::Index num_nodes, Eigen::Index num_channels,
                        double rate, std::uint64_t seed) {
  validate_rate(rate);
  const std::int64_t total = num_nodes * num_channels;
  const auto count = masked_count(rate, total);
  if (count >= total) {
    throw InputError("uniform mask would hide every entry; no source remains");
  }
  MaskMatrix known = MaskMatrix::Constant(num_nodes, num_channels, true);
  Rng rng(seed);
  for (auto flat : sample_without_replacement(total, count, rng)) {
    const auto i = static_cast<Eigen::Index>(flat) / num_channels;
    const auto d = static_cast<Eigen::Index>(flat) % num_channels;
    known(i, d) = false;
  }
  return known;
}

MaskMatrix make_mask(const MaskSpec& spec, Eigen::Index num_nodes,
                     Eigen::Index num_channels) {
  return spec.kind == MaskKind::kStructural
             ? structural_mask(num_nodes, num_channels, spec.rate, spec.seed)
             : uniform_mask(num_nodes, num_channels, spec.rate, spec.seed);
}

FeatureSet apply_mask(const Eigen::Ref<const Matrix>& x, const MaskMatrix& known) {
  if (x.rows() != known.rows() || x.cols() != known.cols()) {
    std::ostringstream os;
    os << "mask shape " << known.rows() << "x" << known.cols()
       << " does not match features " << x.rows() << "x" << x.cols();
    throw InputError(os.str());
  }
  FeatureSet fs{x, known};
  fs.values = known.select(x, Matrix::Zero(x.rows(), x.cols()));
  return fs;
}

bool is_structural(const MaskMatrix& known) {
  for (Eigen::Index i = 0; i < known.rows(); ++i) {
    const bool first = known.cols() > 0 && known(i, 0);
    for (Eigen::Index d = 1; d < known.cols(); ++d) {
      if (known(i, d) != first) return false;
    }
  }
  return true;
}

}  // namespace pcfi
