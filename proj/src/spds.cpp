#include "pcfi/spds.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "pcfi/errors.hpp"
#include "pcfi/parallel.hpp"

namespace pcfi {

std::string_view to_string(SpdsMode mode) {
  return mode == SpdsMode::kStructural ? "structural" : "per_channel";
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1), got " << alpha;
    throw InputError(os.str());
  }
}

IntVector compute_spds_channel(const Graph& g,
                               const Eigen::Ref<const MaskVector>& known) {
  const NodeId n = g.num_nodes();
  if (known.size() != n) {
    throw InputError("compute_spds_channel: mask length does not match graph");
  }
  IntVector dist = IntVector::Constant(n, kUnreachable);
  std::vector<NodeId> frontier;
  for (NodeId v = 0; v < n; ++v) {
    if (known[v]) {
      dist[v] = 0;
      frontier.push_back(v);
    }
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId v = frontier[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

SpdsMatrix compute_spds(const Graph& g, const MaskMatrix& known, SpdsMode mode) {
  if (known.rows() != g.num_nodes()) {
    throw InputError("compute_spds: mask rows do not match graph");
  }
  SpdsMatrix out{IntMatrix(known.rows(), known.cols())};
  if (known.cols() == 0) return out;
  if (mode == SpdsMode::kStructural) {
    if (!is_structural(known)) {
      throw InputError(
          "structural SPD-S requires every mask row to be all observed or all "
          "missing");
    }
    const IntVector col = compute_spds_channel(g, known.col(0));
    out.distances = col.replicate(1, known.cols());
    return out;
  }
  parallel_for(static_cast<std::size_t>(known.cols()), [&](std::size_t d) {
    out.distances.col(static_cast<Eigen::Index>(d)) =
        compute_spds_channel(g, known.col(static_cast<Eigen::Index>(d)));
  });
  return out;
}

double int_pow(double alpha, std::int64_t s) {
  double base = s < 0 ? 1.0 / alpha : alpha;
  std::uint64_t e = s < 0 ? static_cast<std::uint64_t>(-s) : static_cast<std::uint64_t>(s);
  double result = 1.0;
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

Matrix pseudo_confidence(const SpdsMatrix& spds, double alpha) {
  validate_alpha(alpha);
  Matrix xi(spds.num_nodes(), spds.num_channels());
  for (Eigen::Index d = 0; d < xi.cols(); ++d) {
    for (Eigen::Index i = 0; i < xi.rows(); ++i) {
      const auto s = spds(i, d);
      xi(i, d) = s == kUnreachable ? 0.0 : int_pow(alpha, s);
    }
  }
  return xi;
}

double relative_pc(const SpdsMatrix& spds, double alpha, Eigen::Index i,
                   Eigen::Index j, Eigen::Index d) {
  validate_alpha(alpha);
  const auto si = spds(i, d);
  const auto sj = spds(j, d);
  if (si == kUnreachable || sj == kUnreachable) {
    std::ostringstream os;
    os << "relative pseudo-confidence undefined: node " << (si == kUnreachable ? i : j)
       << " has no reachable source in channel " << d;
    throw InputError(os.str());
  }
  return int_pow(alpha, static_cast<std::int64_t>(sj) - si);
}

}  // namespace pcfi
