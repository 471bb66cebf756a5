#pragma once

#include <cstdint>
#include <vector>

#include "pcfi/graph.hpp"
#include "pcfi/types.hpp"

namespace pcfi {

struct SynthSpec {
  NodeId num_nodes = 5000;
  int num_classes = 10;
  int feature_dim = 5;
  double intra_edge_prob = 0.006;
  double inter_edge_prob = 0.0003;
  double gaussian_scale = 0.01;
  std::uint64_t seed = 0;
  // Require exactly equidistant class means (needs num_classes - 1 <= feature_dim).
  bool strict_equidistant = false;
};

void validate(const SynthSpec& spec);

struct SynthGraph {
  Graph graph;                   // largest connected component
  std::vector<int> labels;       // per node of `graph`
  std::vector<NodeId> id_map;    // node of `graph` -> node of the sampled graph
  NodeId sampled_nodes = 0;
  double expected_degree = 0.0;
  bool fragmentation_warning = false;  // expected degree below 1
};

// Block-model graph: classes assigned round-robin then shuffled, each pair
// joined independently with the intra- or inter-class probability, then
// reduced to its largest component.
SynthGraph generate_graph(const SynthSpec& spec);

struct ClassMeans {
  Matrix means;  // C x F, minimum pairwise distance 1
  bool equidistant = false;
  double min_distance = 0.0;
  double max_distance = 0.0;
};

// Regular simplex when C - 1 <= F; otherwise a max-min spread found by
// deterministic repulsion from a fixed start (or InputError if `strict`).
// Independent of any seed, so regenerated features keep the same means.
ClassMeans class_means(int num_classes, int feature_dim, bool strict);

// Gaussian features per class: mean from class_means, covariance
// gaussian_scale * (0.9 I + 0.1 * ones), i.e. off-diagonal = 0.1 x diagonal.
Matrix generate_features(const std::vector<int>& labels, int num_classes,
                         int feature_dim, double gaussian_scale,
                         std::uint64_t seed, bool strict = false,
                         ClassMeans* means_out = nullptr);

struct Homophily {
  double value = 0.0;
  std::size_t edges_used = 0;
  std::size_t edges_skipped = 0;  // an endpoint has a zero-norm feature row
};

// Mean cosine similarity of endpoint features over all edges. Throws
// InputError when no edge is usable.
Homophily feature_homophily(const Graph& g, const Eigen::Ref<const Matrix>& x);

// Fraction of edges joining nodes of the same class.
double class_homophily(const Graph& g, const std::vector<int>& labels);

}  // namespace pcfi
