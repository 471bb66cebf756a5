#pragma once

#include <cstdint>
#include <string_view>

#include "pcfi/graph.hpp"
#include "pcfi/masking.hpp"
#include "pcfi/types.hpp"

namespace pcfi {

// Distance value for nodes that cannot reach any source node of a channel.
inline constexpr std::int32_t kUnreachable = -1;

// Shortest path distance from each node to its nearest source node, per
// channel. Zero exactly at observed entries.
struct SpdsMatrix {
  IntMatrix distances;

  Eigen::Index num_nodes() const noexcept { return distances.rows(); }
  Eigen::Index num_channels() const noexcept { return distances.cols(); }
  std::int32_t operator()(Eigen::Index i, Eigen::Index d) const {
    return distances(i, d);
  }
};

enum class SpdsMode { kStructural, kPerChannel };

std::string_view to_string(SpdsMode mode);

// Multi-source BFS from all known nodes. An empty source set yields an
// all-kUnreachable vector.
IntVector compute_spds_channel(const Graph& g,
                               const Eigen::Ref<const MaskVector>& known);

// kPerChannel runs one BFS per channel. kStructural runs a single BFS on the
// first column and broadcasts it; throws InputError unless every row of the
// mask is constant.
SpdsMatrix compute_spds(const Graph& g, const MaskMatrix& known, SpdsMode mode);

// alpha^s for integer s (negative allowed) by repeated squaring.
double int_pow(double alpha, std::int64_t s);

// xi = alpha^S entrywise, 0 where unreachable. Throws InputError unless
// 0 < alpha < 1.
Matrix pseudo_confidence(const SpdsMatrix& spds, double alpha);

// alpha^(S[j,d] - S[i,d]): the confidence of j relative to i. Throws
// InputError if either entry is unreachable.
double relative_pc(const SpdsMatrix& spds, double alpha, Eigen::Index i,
                   Eigen::Index j, Eigen::Index d);

void validate_alpha(double alpha);

}  // namespace pcfi
