#include "test_support.hpp"

#include <algorithm>
#include <cmath>

namespace pcfi::testing {

std::vector<Edge> random_edges(NodeId n, std::size_t m, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    edges.emplace_back(static_cast<NodeId>(rng.uniform_index(n)),
                       static_cast<NodeId>(rng.uniform_index(n)));
  }
  return edges;
}

Graph random_connected_graph(NodeId n, std::size_t extra, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    edges.emplace_back(v, static_cast<NodeId>(rng.uniform_index(v)));
  }
  auto more = random_edges(n, extra, rng);
  edges.insert(edges.end(), more.begin(), more.end());
  return build_graph(edges, n);
}

Eigen::MatrixXi adjacency(const Graph& g) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(g.num_nodes(), g.num_nodes());
  for (const auto& [u, v] : g.edge_list()) {
    a(u, v) = 1;
    a(v, u) = 1;
  }
  return a;
}

Eigen::MatrixXi all_pairs_hops(const Graph& g) {
  const NodeId n = g.num_nodes();
  const auto a = adjacency(g);
  Eigen::MatrixXi d(n, n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) d(i, j) = i == j ? 0 : (a(i, j) ? 1 : kInf);
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return d;
}

IntMatrix brute_force_spds(const Graph& g, const MaskMatrix& known) {
  const auto hops = all_pairs_hops(g);
  IntMatrix out(known.rows(), known.cols());
  for (Eigen::Index d = 0; d < known.cols(); ++d) {
    for (Eigen::Index i = 0; i < known.rows(); ++i) {
      int best = kInf;
      for (Eigen::Index j = 0; j < known.rows(); ++j) {
        if (known(j, d)) best = std::min(best, hops(i, j));
      }
      out(i, d) = best >= kInf ? -1 : best;
    }
  }
  return out;
}

MaskMatrix random_mask_with_sources(NodeId n, int f, double missing, Rng& rng) {
  MaskMatrix known(n, f);
  for (int d = 0; d < f; ++d) {
    for (NodeId i = 0; i < n; ++i) known(i, d) = !rng.bernoulli(missing);
    known(static_cast<Eigen::Index>(rng.uniform_index(n)), d) = true;
  }
  return known;
}

Matrix dense_operator_oracle(const Graph& g, const std::vector<int>& spds,
                             const std::vector<bool>& known, double alpha) {
  const NodeId n = g.num_nodes();
  const auto a = adjacency(g);
  Matrix w = Matrix::Zero(n, n);
  for (NodeId i = 0; i < n; ++i) {
    if (known[i] || spds[i] < 0) {
      w(i, i) = 1.0;
      continue;
    }
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) {
        w(i, j) = 1.0;
      } else if (a(i, j)) {
        w(i, j) = std::pow(alpha, spds[j] - spds[i]);
      }
    }
    w.row(i) /= w.row(i).sum();
  }
  return w;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = 2.0 * rng.uniform01() - 1.0;
  }
  return m;
}

}  // namespace pcfi::testing
