#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pcfi/graph.hpp"
#include "pcfi/masking.hpp"
#include "pcfi/spds.hpp"
#include "pcfi/types.hpp"

namespace pcfi {

// Square CSR matrix with sorted column indices per row.
struct SparseRowMatrix {
  std::vector<std::size_t> row_ptr;
  std::vector<NodeId> cols;
  std::vector<double> values;

  NodeId rows() const noexcept {
    return static_cast<NodeId>(row_ptr.empty() ? 0 : row_ptr.size() - 1);
  }
  // Entry (r, c); 0 when not stored.
  double coeff(NodeId r, NodeId c) const;
  Matrix to_dense() const;
};

// Per-channel diffusion operator in the known-first index space.
//
// Unknown rows hold weight alpha^(S_j - S_i) for each neighbour j and 1 on the
// diagonal, divided by the row sum. Known rows are one-hot on the diagonal, so
// observed values pass through every step unchanged. Unknown nodes with no
// reachable source get a one-hot self row as well and stay at zero.
class ChannelDiffusion {
 public:
  ChannelDiffusion(ChannelPartition partition, SparseRowMatrix op,
                   std::vector<bool> reachable, double alpha)
      : partition_(std::move(partition)),
        op_(std::move(op)),
        reachable_(std::move(reachable)),
        alpha_(alpha) {}

  int channel() const noexcept { return partition_.channel(); }
  const ChannelPartition& partition() const noexcept { return partition_; }
  const SparseRowMatrix& op() const noexcept { return op_; }
  double alpha() const noexcept { return alpha_; }
  NodeId num_known() const noexcept { return partition_.num_known(); }
  // Indexed by original node id.
  bool reachable(NodeId v) const noexcept { return reachable_[v]; }
  bool all_reachable() const noexcept;

 private:
  ChannelPartition partition_;
  SparseRowMatrix op_;
  std::vector<bool> reachable_;
  double alpha_;
};

// Throws NoSourceError if the partition has no known nodes and InputError for
// an alpha outside (0, 1).
ChannelDiffusion build_channel_operator(const Graph& g,
                                        const Eigen::Ref<const IntVector>& spds,
                                        ChannelPartition partition, double alpha);

struct DiffusionOptions {
  int steps = 100;
  // Stop early once the max-abs change of a step falls below this.
  std::optional<double> tolerance;
};

struct DiffusionResult {
  Vector imputed;     // original node order
  int steps_run = 0;
  double residual = 0.0;  // max-abs change in the last step
};

// K steps of x(t) = W x(t-1) from x(0) = [observed; 0]. `values` is the full
// channel in original order; only entries at known nodes are read.
DiffusionResult diffuse_channel(const ChannelDiffusion& cd,
                                const Eigen::Ref<const Vector>& values,
                                const DiffusionOptions& options = {});

struct BlockDiffusionResult {
  Matrix imputed;
  int steps_run = 0;
  double residual = 0.0;
};

// Diffuses several channels that share one known/unknown pattern through the
// same operator. Column c of the result equals diffuse_channel on column c.
BlockDiffusionResult diffuse_block(const ChannelDiffusion& cd,
                                   const Eigen::Ref<const Matrix>& values,
                                   const DiffusionOptions& options = {});

// Largest unknown system the closed-form solver accepts.
inline constexpr NodeId kClosedFormMaxUnknowns = 2000;

// Absorbing steady state (I - W_uu)^-1 W_uk x_k, solved densely. Unknown nodes
// with no reachable source are left at zero. Throws InputError above
// kClosedFormMaxUnknowns and InvariantError if the system is singular.
Vector closed_form_channel(const ChannelDiffusion& cd,
                           const Eigen::Ref<const Vector>& values);

enum class DiffusionMode { kIterative, kClosedForm };

std::string_view to_string(DiffusionMode mode);
DiffusionMode parse_diffusion_mode(std::string_view s);

struct Stage1Config {
  double alpha = 0.8;
  int steps = 100;
  std::optional<double> tolerance;
  DiffusionMode mode = DiffusionMode::kIterative;
  // Zero-fill channels (or components) without a source instead of throwing.
  bool lenient = false;
};

struct Stage1Result {
  Matrix imputed;
  std::vector<int> flagged_channels;  // channels with a sourceless region
  std::vector<int> steps_run;         // per channel
  std::vector<double> residuals;      // per channel
};

// Channels that have unknown nodes without any reachable source.
std::vector<int> sourceless_channels(const SpdsMatrix& spds);

// Stage 1: channel-wise diffusion of every channel, results in original node
// order. Channels with identical masks share one operator.
Stage1Result impute_stage1(const Graph& g, const FeatureSet& fs,
                           const SpdsMatrix& spds, const Stage1Config& config);

struct FpConfig {
  int steps = 100;
  bool lenient = false;
};

// Baseline diffusion with D^-1/2 (A + I) D^-1/2 and observed values reset
// after every step.
Stage1Result fp_baseline(const Graph& g, const FeatureSet& fs,
                         const FpConfig& config);

}  // namespace pcfi
