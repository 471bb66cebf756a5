#include "pcfi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcfi/errors.hpp"
#include "pcfi/rng.hpp"

namespace pcfi {
namespace {

constexpr std::uint64_t kSpreadSeed = 0x243F6A8885A308D3ULL;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << p;
    throw InputError(os.str());
  }
}

std::pair<double, double> distance_range(const Matrix& points) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index a = 0; a < points.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < points.rows(); ++b) {
      const double d = (points.row(a) - points.row(b)).norm();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  return {lo, hi};
}

// Regular simplex with unit edge length: coordinates of e_i - centroid in the
// Helmert basis of the sum-zero subspace.
Matrix simplex_vertices(int c, int dim) {
  Matrix out = Matrix::Zero(c, dim);
  for (int k = 1; k < c; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) out(i, k - 1) = 1.0 / norm;
    out(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return out / std::sqrt(2.0);
}

// Spreads points over the unit sphere by Riesz-energy descent, then rescales
// to unit minimum distance.
Matrix spread_points(int c, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix pts(c, dim);
  for (int i = 0; i < c; ++i) {
    for (int d = 0; d < dim; ++d) pts(i, d) = rng.normal();
    pts.row(i).normalize();
  }
  constexpr int kIterations = 3000;
  constexpr double kPower = 8.0;
  Matrix force(c, dim);
  for (int it = 0; it < kIterations; ++it) {
    force.setZero();
    for (int a = 0; a < c; ++a) {
      for (int b = 0; b < c; ++b) {
        if (a == b) continue;
        const Eigen::RowVectorXd diff = pts.row(a) - pts.row(b);
        const double dist = std::max(diff.norm(), 1e-9);
        force.row(a) += diff / std::pow(dist, kPower + 2.0);
      }
    }
    const double step = 0.01 / (1.0 + force.rowwise().norm().maxCoeff());
    pts += step * force;
    pts.rowwise().normalize();
  }
  return pts;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.num_classes < 2) throw InputError("synthetic data needs at least two classes");
  if (spec.num_nodes < spec.num_classes) {
    throw InputError("synthetic data needs at least one node per class");
  }
  if (spec.feature_dim < 1) throw InputError("feature dimension must be positive");
  check_probability(spec.intra_edge_prob, "intra-class edge probability");
  check_probability(spec.inter_edge_prob, "inter-class edge probability");
  if (!(spec.gaussian_scale > 0.0) || !std::isfinite(spec.gaussian_scale)) {
    throw InputError("gaussian scale must be positive");
  }
  if (spec.strict_equidistant && spec.num_classes - 1 > spec.feature_dim) {
    throw InputError("equidistant class means need feature_dim >= num_classes - 1");
  }
}

SynthGraph generate_graph(const SynthSpec& spec) {
  validate(spec);
  const NodeId n = spec.num_nodes;
  Rng rng(spec.seed);

  std::vector<int> labels(n);
  for (NodeId v = 0; v < n; ++v) labels[v] = v % spec.num_classes;
  for (NodeId i = n - 1; i > 0; --i) {
    const auto j = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
    std::swap(labels[i], labels[j]);
  }

  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p =
          labels[u] == labels[v] ? spec.intra_edge_prob : spec.inter_edge_prob;
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  const Graph full = build_graph(edges, n);
  auto lcc = extract_largest_component(full);

  SynthGraph out;
  out.sampled_nodes = n;
  const double class_size = static_cast<double>(n) / spec.num_classes;
  out.expected_degree = (class_size - 1.0) * spec.intra_edge_prob +
                        (n - class_size) * spec.inter_edge_prob;
  out.fragmentation_warning =
      out.expected_degree < 1.0 || lcc.graph.num_nodes() < n;
  out.labels.reserve(lcc.id_map.size());
  for (NodeId v : lcc.id_map) out.labels.push_back(labels[v]);
  out.graph = std::move(lcc.graph);
  out.id_map = std::move(lcc.id_map);
  return out;
}

ClassMeans class_means(int num_classes, int feature_dim, bool strict) {
  if (num_classes < 1 || feature_dim < 1) {
    throw InputError("class_means: need at least one class and one dimension");
  }
  ClassMeans out;
  if (num_classes - 1 <= feature_dim) {
    out.means = simplex_vertices(num_classes, feature_dim);
    out.equidistant = true;
  } else {
    if (strict) {
      throw InputError("equidistant class means need feature_dim >= num_classes - 1");
    }
    out.means = spread_points(num_classes, feature_dim, kSpreadSeed);
  }
  if (num_classes > 1) {
    auto [lo, hi] = distance_range(out.means);
    out.means /= lo;
    out.min_distance = 1.0;
    out.max_distance = hi / lo;
  }
  return out;
}

Matrix generate_features(const std::vector<int>& labels, int num_classes,
                         int feature_dim, double gaussian_scale, std::uint64_t seed,
                         bool strict, ClassMeans* means_out) {
  if (feature_dim < 1) throw InputError("feature dimension must be positive");
  if (!(gaussian_scale > 0.0)) throw InputError("gaussian scale must be positive");
  for (int c : labels) {
    if (c < 0 || c >= num_classes) throw InputError("label outside [0, num_classes)");
  }
  auto means = class_means(num_classes, feature_dim, strict);

  // Covariance s (0.9 I + 0.1 J): independent part plus one shared factor.
  const double own = std::sqrt(gaussian_scale * 0.9);
  const double shared = std::sqrt(gaussian_scale * 0.1);
  Rng rng(seed ^ 0x5851F42D4C957F2DULL);
  Matrix x(static_cast<Eigen::Index>(labels.size()), feature_dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (int d = 0; d < feature_dim; ++d) x(i, d) = own * rng.normal();
    x.row(i).array() += shared * rng.normal();
    x.row(i) += means.means.row(labels[static_cast<std::size_t>(i)]);
  }
  if (means_out != nullptr) *means_out = std::move(means);
  return x;
}

Homophily feature_homophily(const Graph& g, const Eigen::Ref<const Matrix>& x) {
  if (x.rows() != g.num_nodes()) {
    throw InputError("feature_homophily: feature rows do not match graph");
  }
  const Vector norms = x.rowwise().norm();
  Homophily out;
  double total = 0.0;
  for (const auto& [u, v] : g.edge_list()) {
    if (norms[u] == 0.0 || norms[v] == 0.0) {
      ++out.edges_skipped;
      continue;
    }
    total += x.row(u).dot(x.row(v)) / (norms[u] * norms[v]);
    ++out.edges_used;
  }
  if (out.edges_used == 0) throw InputError("feature homophily undefined: no usable edges");
  out.value = total / static_cast<double>(out.edges_used);
  return out;
}

double class_homophily(const Graph& g, const std::vector<int>& labels) {
  if (labels.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw InputError("class_homophily: label count does not match graph");
  }
  if (g.num_edges() == 0) throw InputError("class homophily undefined: no edges");
  std::size_t same = 0;
  for (const auto& [u, v] : g.edge_list()) same += labels[u] == labels[v];
  return static_cast<double>(same) / static_cast<double>(g.num_edges());
}

}  // namespace pcfi
