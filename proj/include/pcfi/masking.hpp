#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pcfi/types.hpp"

namespace pcfi {

// Observed feature matrix. Entries with known == false hold 0.
struct FeatureSet {
  Matrix values;
  MaskMatrix known;

  Eigen::Index num_nodes() const noexcept { return values.rows(); }
  Eigen::Index num_channels() const noexcept { return values.cols(); }
};

enum class MaskKind { kStructural, kUniform };

std::string_view to_string(MaskKind kind);
MaskKind parse_mask_kind(std::string_view s);

struct MaskSpec {
  MaskKind kind = MaskKind::kStructural;
  double rate = 0.5;  // missing rate, open interval (0, 1)
  std::uint64_t seed = 0;
};

// Number of masked units for a rate: floor(rate * total + 1/2).
std::int64_t masked_count(double rate, std::int64_t total);

// Masks round(rate * N) whole rows chosen uniformly without replacement.
MaskMatrix structural_mask(Eigen::Index num_nodes, Eigen::Index num_channels,
                           double rate, std::uint64_t seed);

// Masks round(rate * N * F) entries chosen uniformly without replacement over
// the row-major flattened grid.
MaskMatrix uniform_mask(Eigen::Index num_nodes, Eigen::Index num_channels,
                        double rate, std::uint64_t seed);

MaskMatrix make_mask(const MaskSpec& spec, Eigen::Index num_nodes,
                     Eigen::Index num_channels);

// Copies x and zeroes every unobserved entry.
FeatureSet apply_mask(const Eigen::Ref<const Matrix>& x, const MaskMatrix& known);

// True when every row is entirely observed or entirely missing.
bool is_structural(const MaskMatrix& known);

}  // namespace pcfi
