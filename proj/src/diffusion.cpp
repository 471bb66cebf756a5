#include "pcfi/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <Eigen/LU>

#include "pcfi/errors.hpp"
#include "pcfi/parallel.hpp"

namespace pcfi {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr NodeId kRowsPerTask = 256;

void validate_steps(int steps) {
  if (steps < 1) throw InputError("diffusion needs at least one step");
}

// Applies `op` to `state` `steps` times. Rows below `pinned_rows` are copied
// through untouched. Returns {steps run, max-abs change of the last step}.
std::pair<int, double> run_diffusion(const SparseRowMatrix& op, RowMatrix& state,
                                     NodeId pinned_rows,
                                     const DiffusionOptions& options,
                                     bool parallel_rows) {
  validate_steps(options.steps);
  const NodeId n = op.rows();
  RowMatrix next(state.rows(), state.cols());
  next.topRows(pinned_rows) = state.topRows(pinned_rows);

  const NodeId free_rows = n - pinned_rows;
  const std::size_t tasks =
      free_rows <= 0 ? 0 : static_cast<std::size_t>((free_rows + kRowsPerTask - 1) / kRowsPerTask);
  std::vector<double> task_residual(tasks, 0.0);

  auto step_rows = [&](std::size_t task) {
    const NodeId begin = pinned_rows + static_cast<NodeId>(task) * kRowsPerTask;
    const NodeId end = std::min<NodeId>(n, begin + kRowsPerTask);
    double residual = 0.0;
    for (NodeId r = begin; r < end; ++r) {
      auto out = next.row(r);
      out.setZero();
      for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k) {
        out += op.values[k] * state.row(op.cols[k]);
      }
      residual = std::max(residual, (out - state.row(r)).cwiseAbs().maxCoeff());
    }
    task_residual[task] = residual;
  };

  int steps_run = 0;
  double residual = 0.0;
  while (steps_run < options.steps) {
    if (parallel_rows) {
      parallel_for(tasks, step_rows);
    } else {
      for (std::size_t t = 0; t < tasks; ++t) step_rows(t);
    }
    state.swap(next);  // pinned rows are identical in both buffers
    ++steps_run;
    residual = 0.0;
    for (double r : task_residual) residual = std::max(residual, r);
    if (options.tolerance && residual < *options.tolerance) break;
  }
  return {steps_run, residual};
}

void check_channel_length(const ChannelDiffusion& cd, Eigen::Index len) {
  if (len != cd.partition().num_nodes()) {
    throw InputError("channel length does not match the diffusion operator");
  }
}

BlockDiffusionResult diffuse_block_impl(const ChannelDiffusion& cd,
                                        const Eigen::Ref<const Matrix>& values,
                                        const DiffusionOptions& options,
                                        bool parallel_rows) {
  check_channel_length(cd, values.rows());
  const auto& part = cd.partition();
  const NodeId n = part.num_nodes();
  RowMatrix state = RowMatrix::Zero(n, values.cols());
  for (NodeId r = 0; r < part.num_known(); ++r) {
    state.row(r) = values.row(part.to_original(r));
  }
  const auto [steps_run, residual] =
      run_diffusion(cd.op(), state, part.num_known(), options, parallel_rows);
  BlockDiffusionResult out;
  out.imputed.resize(n, values.cols());
  for (NodeId v = 0; v < n; ++v) out.imputed.row(v) = state.row(part.to_reordered(v));
  out.steps_run = steps_run;
  out.residual = residual;
  return out;
}

}  // namespace

double SparseRowMatrix::coeff(NodeId r, NodeId c) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  return (it != last && *it == c) ? values[static_cast<std::size_t>(it - cols.begin())]
                                  : 0.0;
}

Matrix SparseRowMatrix::to_dense() const {
  Matrix out = Matrix::Zero(rows(), rows());
  for (NodeId r = 0; r < rows(); ++r) {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out(r, cols[k]) = values[k];
  }
  return out;
}

bool ChannelDiffusion::all_reachable() const noexcept {
  return std::all_of(reachable_.begin(), reachable_.end(), [](bool b) { return b; });
}

ChannelDiffusion build_channel_operator(const Graph& g,
                                        const Eigen::Ref<const IntVector>& spds,
                                        ChannelPartition partition, double alpha) {
  validate_alpha(alpha);
  const NodeId n = g.num_nodes();
  if (spds.size() != n || partition.num_nodes() != n) {
    throw InputError("build_channel_operator: SPD-S or partition size mismatch");
  }
  if (partition.num_known() == 0) throw NoSourceError({partition.channel()});

  std::vector<bool> reachable(n);
  for (NodeId v = 0; v < n; ++v) reachable[v] = spds[v] != kUnreachable;

  SparseRowMatrix op;
  op.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
  op.row_ptr.push_back(0);
  std::vector<std::pair<NodeId, double>> row;
  for (NodeId r = 0; r < n; ++r) {
    const NodeId v = partition.to_original(r);
    row.clear();
    if (r < partition.num_known() || !reachable[v]) {
      row.emplace_back(r, 1.0);
    } else {
      row.emplace_back(r, 1.0);
      for (NodeId w : g.neighbors(v)) {
        row.emplace_back(partition.to_reordered(w),
                         int_pow(alpha, static_cast<std::int64_t>(spds[w]) - spds[v]));
      }
      std::sort(row.begin(), row.end());
      double sum = 0.0;
      for (const auto& e : row) sum += e.second;
      for (auto& e : row) e.second /= sum;
    }
    for (const auto& [c, w] : row) {
      op.cols.push_back(c);
      op.values.push_back(w);
    }
    op.row_ptr.push_back(op.cols.size());
  }
  return ChannelDiffusion(std::move(partition), std::move(op), std::move(reachable),
                          alpha);
}

DiffusionResult diffuse_channel(const ChannelDiffusion& cd,
                                const Eigen::Ref<const Vector>& values,
                                const DiffusionOptions& options) {
  Matrix as_block = values;
  auto block = diffuse_block_impl(cd, as_block, options, /*parallel_rows=*/true);
  return {block.imputed.col(0), block.steps_run, block.residual};
}

BlockDiffusionResult diffuse_block(const ChannelDiffusion& cd,
                                   const Eigen::Ref<const Matrix>& values,
                                   const DiffusionOptions& options) {
  return diffuse_block_impl(cd, values, options, /*parallel_rows=*/true);
}

Vector closed_form_channel(const ChannelDiffusion& cd,
                           const Eigen::Ref<const Vector>& values) {
  check_channel_length(cd, values.size());
  const auto& part = cd.partition();
  const auto& op = cd.op();
  const NodeId n = part.num_nodes();
  const NodeId k = part.num_known();

  // Position of each reordered unknown row in the reduced system, -1 if the
  // row has no reachable source.
  std::vector<NodeId> slot(n, -1);
  NodeId m = 0;
  for (NodeId r = k; r < n; ++r) {
    if (cd.reachable(part.to_original(r))) slot[r] = m++;
  }
  if (m > kClosedFormMaxUnknowns) {
    std::ostringstream os;
    os << "closed-form solve refused: " << m << " unknowns exceed the limit of "
       << kClosedFormMaxUnknowns;
    throw InputError(os.str());
  }

  Matrix system = Matrix::Identity(m, m);
  Vector rhs = Vector::Zero(m);
  for (NodeId r = k; r < n; ++r) {
    if (slot[r] < 0) continue;
    for (std::size_t e = op.row_ptr[r]; e < op.row_ptr[r + 1]; ++e) {
      const NodeId c = op.cols[e];
      if (c < k) {
        rhs[slot[r]] += op.values[e] * values[part.to_original(c)];
      } else if (slot[c] >= 0) {
        system(slot[r], slot[c]) -= op.values[e];
      }
    }
  }

  Vector solution = Vector::Zero(m);
  if (m > 0) {
    Eigen::PartialPivLU<Matrix> lu(system);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    if (!diag.allFinite() || diag.minCoeff() <= 1e-14) {
      throw InvariantError("closed-form system (I - W_uu) is singular");
    }
    solution = lu.solve(rhs);
  }

  Vector out = Vector::Zero(n);
  for (NodeId r = 0; r < n; ++r) {
    const NodeId v = part.to_original(r);
    if (r < k) {
      out[v] = values[v];
    } else if (slot[r] >= 0) {
      out[v] = solution[slot[r]];
    }
  }
  return out;
}

std::string_view to_string(DiffusionMode mode) {
  return mode == DiffusionMode::kIterative ? "iterative" : "closed_form";
}

DiffusionMode parse_diffusion_mode(std::string_view s) {
  if (s == "iterative") return DiffusionMode::kIterative;
  if (s == "closed_form") return DiffusionMode::kClosedForm;
  throw InputError("unknown diffusion mode '" + std::string(s) + "'");
}

std::vector<int> sourceless_channels(const SpdsMatrix& spds) {
  std::vector<int> out;
  for (Eigen::Index d = 0; d < spds.num_channels(); ++d) {
    if ((spds.distances.col(d).array() == kUnreachable).any()) {
      out.push_back(static_cast<int>(d));
    }
  }
  return out;
}

namespace {

void check_shapes(const Graph& g, const FeatureSet& fs) {
  if (fs.values.rows() != g.num_nodes() || fs.known.rows() != fs.values.rows() ||
      fs.known.cols() != fs.values.cols()) {
    std::ostringstream os;
    os << "feature matrix " << fs.values.rows() << "x" << fs.values.cols()
       << " / mask " << fs.known.rows() << "x" << fs.known.cols()
       << " inconsistent with a graph of " << g.num_nodes() << " nodes";
    throw InputError(os.str());
  }
}

// Channels grouped by identical mask column, ordered by first channel.
std::vector<std::vector<int>> group_by_mask(const MaskMatrix& known) {
  std::map<std::vector<bool>, std::size_t> index;
  std::vector<std::vector<int>> groups;
  for (Eigen::Index d = 0; d < known.cols(); ++d) {
    std::vector<bool> key(known.col(d).begin(), known.col(d).end());
    auto [it, inserted] = index.try_emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(static_cast<int>(d));
  }
  return groups;
}

}  // namespace

Stage1Result impute_stage1(const Graph& g, const FeatureSet& fs,
                           const SpdsMatrix& spds, const Stage1Config& config) {
  check_shapes(g, fs);
  if (spds.num_nodes() != fs.num_nodes() || spds.num_channels() != fs.num_channels()) {
    throw InputError("SPD-S shape does not match the feature matrix");
  }
  validate_alpha(config.alpha);
  if (config.mode == DiffusionMode::kIterative) validate_steps(config.steps);

  Stage1Result out;
  out.flagged_channels = sourceless_channels(spds);
  if (!config.lenient && !out.flagged_channels.empty()) {
    throw NoSourceError(out.flagged_channels);
  }

  const auto f = fs.num_channels();
  out.imputed = Matrix::Zero(fs.num_nodes(), f);
  out.steps_run.assign(static_cast<std::size_t>(f), 0);
  out.residuals.assign(static_cast<std::size_t>(f), 0.0);

  const auto groups = group_by_mask(fs.known);
  const DiffusionOptions options{config.steps, config.tolerance};
  const bool parallel_rows = groups.size() == 1;

  auto run_group = [&](std::size_t gi) {
    const auto& channels = groups[gi];
    const int first = channels.front();
    ChannelPartition partition(first, fs.known.col(first));
    if (partition.num_known() == 0) return;  // flagged; stays zero
    const auto cd =
        build_channel_operator(g, spds.distances.col(first), std::move(partition),
                               config.alpha);
    if (config.mode == DiffusionMode::kClosedForm) {
      for (int d : channels) out.imputed.col(d) = closed_form_channel(cd, fs.values.col(d));
      return;
    }
    Matrix block(fs.num_nodes(), static_cast<Eigen::Index>(channels.size()));
    for (std::size_t c = 0; c < channels.size(); ++c) {
      block.col(static_cast<Eigen::Index>(c)) = fs.values.col(channels[c]);
    }
    const auto result = diffuse_block_impl(cd, block, options, parallel_rows);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      out.imputed.col(channels[c]) = result.imputed.col(static_cast<Eigen::Index>(c));
      out.steps_run[channels[c]] = result.steps_run;
      out.residuals[channels[c]] = result.residual;
    }
  };
  if (parallel_rows) {
    run_group(0);
  } else {
    parallel_for(groups.size(), run_group);
  }
  return out;
}

Stage1Result fp_baseline(const Graph& g, const FeatureSet& fs, const FpConfig& config) {
  check_shapes(g, fs);
  validate_steps(config.steps);
  const NodeId n = g.num_nodes();

  Stage1Result out;
  const auto spds = compute_spds(
      g, fs.known, is_structural(fs.known) ? SpdsMode::kStructural : SpdsMode::kPerChannel);
  out.flagged_channels = sourceless_channels(spds);
  if (!config.lenient && !out.flagged_channels.empty()) {
    throw NoSourceError(out.flagged_channels);
  }

  // D^-1/2 (A + I) D^-1/2 with D the degree including the self-loop.
  SparseRowMatrix op;
  op.row_ptr.push_back(0);
  for (NodeId v = 0; v < n; ++v) {
    const double dv = g.degree(v) + 1.0;
    bool self_done = false;
    for (NodeId w : g.neighbors(v)) {
      if (!self_done && w > v) {
        op.cols.push_back(v);
        op.values.push_back(1.0 / dv);
        self_done = true;
      }
      op.cols.push_back(w);
      op.values.push_back(1.0 / std::sqrt(dv * (g.degree(w) + 1.0)));
    }
    if (!self_done) {
      op.cols.push_back(v);
      op.values.push_back(1.0 / dv);
    }
    op.row_ptr.push_back(op.cols.size());
  }

  const auto f = fs.num_channels();
  RowMatrix observed = fs.values;
  RowMatrix state = observed;
  RowMatrix next(n, f);
  // Row-major copy of the mask so the reset loop walks memory in order.
  const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> known =
      fs.known;

  const std::size_t tasks = static_cast<std::size_t>((n + kRowsPerTask - 1) / kRowsPerTask);
  std::vector<double> task_residual(tasks, 0.0);
  double residual = 0.0;
  for (int step = 0; step < config.steps; ++step) {
    parallel_for(tasks, [&](std::size_t task) {
      const NodeId begin = static_cast<NodeId>(task) * kRowsPerTask;
      const NodeId end = std::min<NodeId>(n, begin + kRowsPerTask);
      double r_max = 0.0;
      for (NodeId r = begin; r < end; ++r) {
        auto row = next.row(r);
        row.setZero();
        for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k) {
          row += op.values[k] * state.row(op.cols[k]);
        }
        for (Eigen::Index d = 0; d < f; ++d) {
          if (known(r, d)) {
            row[d] = observed(r, d);
          } else {
            r_max = std::max(r_max, std::abs(row[d] - state(r, d)));
          }
        }
      }
      task_residual[task] = r_max;
    });
    state.swap(next);
    residual = 0.0;
    for (double r : task_residual) residual = std::max(residual, r);
  }
  out.imputed = state;
  out.steps_run.assign(static_cast<std::size_t>(f), config.steps);
  out.residuals.assign(static_cast<std::size_t>(f), residual);
  return out;
}

}  // namespace pcfi
