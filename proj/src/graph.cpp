#include "pcfi/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "pcfi/errors.hpp"
#include "pcfi/masking.hpp"

namespace pcfi {

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges, NodeId num_nodes) {
  if (num_nodes < 0) throw InputError("build_graph: negative node count");
  std::vector<std::size_t> degree(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      std::ostringstream os;
      os << "edge (" << u << ", " << v << ") has a node id outside [0, "
         << num_nodes << ")";
      throw InputError(os.str());
    }
    if (u == v) continue;
    ++degree[u + 1];
    ++degree[v + 1];
  }
  for (std::size_t i = 1; i < degree.size(); ++i) degree[i] += degree[i - 1];

  std::vector<NodeId> targets(degree.back());
  std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    targets[fill[u]++] = v;
    targets[fill[v]++] = u;
  }

  // Sort and deduplicate each list, compacting in place.
  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  std::size_t write = 0;
  for (NodeId v = 0; v < num_nodes; ++v) {
    auto first = targets.begin() + static_cast<std::ptrdiff_t>(degree[v]);
    auto last = targets.begin() + static_cast<std::ptrdiff_t>(degree[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) targets[write++] = *it;
    g.offsets_[v + 1] = write;
  }
  targets.resize(write);
  targets.shrink_to_fit();
  g.targets_ = std::move(targets);
  return g;
}

ComponentLabels connected_components(const Graph& g) {
  const NodeId n = g.num_nodes();
  ComponentLabels out;
  out.labels.assign(n, -1);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId start = 0; start < n; ++start) {
    if (out.labels[start] >= 0) continue;
    const NodeId id = out.num_components++;
    queue.clear();
    queue.push_back(start);
    out.labels[start] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId w : g.neighbors(queue[head])) {
        if (out.labels[w] < 0) {
          out.labels[w] = id;
          queue.push_back(w);
        }
      }
    }
    out.sizes.push_back(static_cast<NodeId>(queue.size()));
  }
  for (NodeId c = 0; c < out.num_components; ++c) {
    if (out.largest_id < 0 || out.sizes[c] > out.sizes[out.largest_id]) {
      out.largest_id = c;
    }
  }
  return out;
}

LargestComponent extract_largest_component(const Graph& g) {
  LargestComponent out;
  const auto cc = connected_components(g);
  if (cc.num_components == 0) return out;
  std::vector<NodeId> new_id(g.num_nodes(), -1);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (cc.labels[v] == cc.largest_id) {
      new_id[v] = static_cast<NodeId>(out.id_map.size());
      out.id_map.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edge_list()) {
    if (new_id[u] >= 0) edges.emplace_back(new_id[u], new_id[v]);
  }
  out.graph = build_graph(edges, static_cast<NodeId>(out.id_map.size()));
  return out;
}

LargestComponentWithFeatures extract_largest_component(const Graph& g,
                                                       const FeatureSet& fs) {
  if (fs.num_nodes() != g.num_nodes() || fs.known.rows() != fs.values.rows() ||
      fs.known.cols() != fs.values.cols()) {
    throw InputError("extract_largest_component: feature rows do not match graph");
  }
  auto lcc = extract_largest_component(g);
  LargestComponentWithFeatures out;
  out.values = select_rows(fs.values, lcc.id_map);
  out.known = select_rows(fs.known, lcc.id_map);
  out.graph = std::move(lcc.graph);
  out.id_map = std::move(lcc.id_map);
  return out;
}

ChannelPartition::ChannelPartition(int channel,
                                   const Eigen::Ref<const MaskVector>& known)
    : channel_(channel) {
  const auto n = static_cast<NodeId>(known.size());
  for (NodeId v = 0; v < n; ++v) {
    (known[v] ? known_nodes_ : unknown_nodes_).push_back(v);
  }
  to_original_.reserve(n);
  to_original_.insert(to_original_.end(), known_nodes_.begin(), known_nodes_.end());
  to_original_.insert(to_original_.end(), unknown_nodes_.begin(),
                      unknown_nodes_.end());
  to_reordered_.assign(n, 0);
  for (NodeId r = 0; r < n; ++r) to_reordered_[to_original_[r]] = r;
}

Vector ChannelPartition::reorder(const Eigen::Ref<const Vector>& in) const {
  Vector out(in.size());
  for (NodeId r = 0; r < num_nodes(); ++r) out[r] = in[to_original_[r]];
  return out;
}

Vector ChannelPartition::restore(const Eigen::Ref<const Vector>& in) const {
  Vector out(in.size());
  for (NodeId r = 0; r < num_nodes(); ++r) out[to_original_[r]] = in[r];
  return out;
}

ChannelPartition partition_channel(const Eigen::Ref<const MaskVector>& known,
                                   int channel) {
  return ChannelPartition(channel, known);
}

}  // namespace pcfi
