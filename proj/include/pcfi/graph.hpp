#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pcfi/types.hpp"

namespace pcfi {

struct FeatureSet;

using Edge = std::pair<NodeId, NodeId>;

// Undirected simple graph in compressed sparse row form. Neighbor lists are
// sorted, duplicate free, symmetric and never contain the node itself.
class Graph {
 public:
  Graph() = default;

  NodeId num_nodes() const noexcept {
    return static_cast<NodeId>(offsets_.empty() ? 0 : offsets_.size() - 1);
  }
  // Number of undirected edges.
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {targets_.data() + offsets_[v],
            targets_.data() + offsets_[v + 1]};
  }
  NodeId degree(NodeId v) const noexcept {
    return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(NodeId u, NodeId v) const;

  // Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edge_list() const;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> targets() const noexcept { return targets_; }

 private:
  friend Graph build_graph(std::span<const Edge> edges, NodeId num_nodes);

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

// Builds the symmetric, deduplicated graph. Self-loops in the input are
// dropped. Throws InputError naming the first pair with an id outside
// [0, num_nodes).
Graph build_graph(std::span<const Edge> edges, NodeId num_nodes);

struct ComponentLabels {
  std::vector<NodeId> labels;   // component id per node, numbered by first node
  NodeId num_components = 0;
  NodeId largest_id = -1;       // largest component, smallest id on ties
  std::vector<NodeId> sizes;    // node count per component
};

ComponentLabels connected_components(const Graph& g);

struct LargestComponent {
  Graph graph;
  std::vector<NodeId> id_map;  // new id -> original id, ascending
};

// Induced subgraph on the largest connected component with ids compacted in
// ascending original order.
LargestComponent extract_largest_component(const Graph& g);

struct LargestComponentWithFeatures {
  Graph graph;
  Matrix values;
  MaskMatrix known;
  std::vector<NodeId> id_map;
};

LargestComponentWithFeatures extract_largest_component(const Graph& g,
                                                       const FeatureSet& fs);

// Rows of m at the given ids, in order.
template <typename Derived>
auto select_rows(const Eigen::MatrixBase<Derived>& m,
                 std::span<const NodeId> ids) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      static_cast<Eigen::Index>(ids.size()), m.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(ids[i]);
  }
  return out;
}

// Known-first reordering of the nodes for one channel.
class ChannelPartition {
 public:
  ChannelPartition() = default;
  ChannelPartition(int channel, const Eigen::Ref<const MaskVector>& known);

  int channel() const noexcept { return channel_; }
  NodeId num_nodes() const noexcept {
    return static_cast<NodeId>(to_original_.size());
  }
  NodeId num_known() const noexcept {
    return static_cast<NodeId>(known_nodes_.size());
  }
  const std::vector<NodeId>& known_nodes() const noexcept { return known_nodes_; }
  const std::vector<NodeId>& unknown_nodes() const noexcept {
    return unknown_nodes_;
  }

  // old id -> reordered id
  NodeId to_reordered(NodeId v) const noexcept { return to_reordered_[v]; }
  // reordered id -> old id
  NodeId to_original(NodeId r) const noexcept { return to_original_[r]; }
  const std::vector<NodeId>& permutation() const noexcept { return to_reordered_; }
  const std::vector<NodeId>& inverse_permutation() const noexcept {
    return to_original_;
  }

  bool is_known(NodeId v) const noexcept { return to_reordered_[v] < num_known(); }

  // out[to_reordered(v)] = in[v]
  Vector reorder(const Eigen::Ref<const Vector>& in) const;
  // out[v] = in[to_reordered(v)]
  Vector restore(const Eigen::Ref<const Vector>& in) const;

 private:
  int channel_ = 0;
  std::vector<NodeId> known_nodes_;
  std::vector<NodeId> unknown_nodes_;
  std::vector<NodeId> to_reordered_;
  std::vector<NodeId> to_original_;
};

ChannelPartition partition_channel(const Eigen::Ref<const MaskVector>& known,
                                   int channel);

}  // namespace pcfi
