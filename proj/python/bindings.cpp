#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcfi/diffusion.hpp"
#include "pcfi/errors.hpp"
#include "pcfi/eval.hpp"
#include "pcfi/graph.hpp"
#include "pcfi/imputation.hpp"
#include "pcfi/masking.hpp"
#include "pcfi/parallel.hpp"
#include "pcfi/propagation.hpp"
#include "pcfi/rng.hpp"
#include "pcfi/spds.hpp"
#include "pcfi/synth.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using EdgeArray = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2, Eigen::RowMajor>;

pcfi::Graph make_graph(const EdgeArray& edges, pcfi::NodeId num_nodes) {
  std::vector<pcfi::Edge> list;
  list.reserve(static_cast<std::size_t>(edges.rows()));
  for (Eigen::Index i = 0; i < edges.rows(); ++i) {
    const auto u = edges(i, 0);
    const auto v = edges(i, 1);
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
      throw pcfi::InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") out of range for " + std::to_string(num_nodes) + " nodes");
    }
    list.emplace_back(static_cast<pcfi::NodeId>(u), static_cast<pcfi::NodeId>(v));
  }
  return pcfi::build_graph(list, num_nodes);
}

EdgeArray edge_array(const pcfi::Graph& g) {
  const auto list = g.edge_list();
  EdgeArray out(static_cast<Eigen::Index>(list.size()), 2);
  for (std::size_t i = 0; i < list.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = list[i].first;
    out(static_cast<Eigen::Index>(i), 1) = list[i].second;
  }
  return out;
}

pcfi::SpdsMode parse_spds_mode(const std::string& s) {
  if (s == "structural") return pcfi::SpdsMode::kStructural;
  if (s == "per_channel") return pcfi::SpdsMode::kPerChannel;
  throw pcfi::InputError("unknown SPD-S mode '" + s + "' (expected structural or per_channel)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudo-confidence feature imputation for graphs with missing node features";

  auto base = py::register_exception<pcfi::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<pcfi::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<pcfi::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<pcfi::InvariantError>(m, "InvariantError", base.ptr());

  m.attr("UNREACHABLE") = pcfi::kUnreachable;
  m.attr("RNG_ALGORITHM") = std::string(pcfi::Rng::kAlgorithm);

  py::class_<pcfi::Graph>(m, "Graph")
      .def(py::init(&make_graph), "edges"_a, "num_nodes"_a,
           "Undirected graph from an (E, 2) array of node ids. Duplicates and self-loops "
           "are dropped.")
      .def_property_readonly("num_nodes", &pcfi::Graph::num_nodes)
      .def_property_readonly("num_edges", &pcfi::Graph::num_edges)
      .def("degree", &pcfi::Graph::degree, "v"_a)
      .def("neighbors",
           [](const pcfi::Graph& g, pcfi::NodeId v) {
             if (v < 0 || v >= g.num_nodes()) throw py::index_error("node out of range");
             const auto s = g.neighbors(v);
             return std::vector<pcfi::NodeId>(s.begin(), s.end());
           },
           "v"_a)
      .def("edges", &edge_array, "Edges as an (E, 2) array with u < v.")
      .def("__repr__", [](const pcfi::Graph& g) {
        return "<pcfi.Graph nodes=" + std::to_string(g.num_nodes()) +
               " edges=" + std::to_string(g.num_edges()) + ">";
      });

  m.def("largest_component",
        [](const pcfi::Graph& g) {
          auto lc = pcfi::extract_largest_component(g);
          return py::make_tuple(std::move(lc.graph), std::move(lc.id_map));
        },
        "graph"_a, "Largest connected component and its node id map.");

  m.def("structural_mask", &pcfi::structural_mask, "num_nodes"_a, "num_channels"_a,
        "rate"_a, "seed"_a = 0, "Boolean (N, F) mask, True = observed; whole rows hidden.");
  m.def("uniform_mask", &pcfi::uniform_mask, "num_nodes"_a, "num_channels"_a, "rate"_a,
        "seed"_a = 0, "Boolean (N, F) mask, True = observed; single entries hidden.");

  m.def("compute_spds",
        [](const pcfi::Graph& g, const pcfi::MaskMatrix& known, const std::string& mode) {
          return pcfi::compute_spds(g, known, parse_spds_mode(mode)).distances;
        },
        "graph"_a, "known"_a, "mode"_a = "per_channel",
        "Hop distance to the nearest observed node per channel; UNREACHABLE (-1) when none.");
  m.def("pseudo_confidence",
        [](const pcfi::IntMatrix& spds, double alpha) {
          return pcfi::pseudo_confidence(pcfi::SpdsMatrix{spds}, alpha);
        },
        "spds"_a, "alpha"_a);

  m.def("impute",
        [](const pcfi::Graph& g, const pcfi::Matrix& features, const pcfi::MaskMatrix& known,
           double alpha, double beta, int steps, const std::string& method,
           const std::string& mode, bool lenient, std::optional<double> tolerance,
           std::optional<double> receiver_alpha) {
          pcfi::ImputationConfig cfg;
          cfg.alpha = alpha;
          cfg.beta = beta;
          cfg.steps = steps;
          cfg.method = pcfi::parse_method(method);
          cfg.mode = pcfi::parse_diffusion_mode(mode);
          cfg.lenient = lenient;
          cfg.tolerance = tolerance;
          cfg.receiver_alpha = receiver_alpha;
          pcfi::validate(cfg);
          const auto fs = pcfi::apply_mask(features, known);
          pcfi::ImputationResult r;
          {
            py::gil_scoped_release release;
            r = pcfi::impute(g, fs, cfg);
          }
          py::dict out;
          out["imputed"] = std::move(r.imputed);
          out["spds"] = std::move(r.spds.distances);
          out["flagged_channels"] = std::move(r.flagged_channels);
          out["steps_run"] = std::move(r.steps_run);
          out["residuals"] = std::move(r.residuals);
          return out;
        },
        "graph"_a, "features"_a, "known"_a, "alpha"_a = 0.8, "beta"_a = 1e-3, "steps"_a = 100,
        "method"_a = "pcfi", "mode"_a = "iterative", "lenient"_a = false,
        "tolerance"_a = py::none(), "receiver_alpha"_a = py::none(),
        "Impute unobserved entries. Values at unobserved positions of `features` are ignored.");

  m.def("correlation",
        [](const pcfi::Matrix& xhat) {
          auto c = pcfi::correlation(xhat);
          return py::make_tuple(std::move(c.r), std::move(c.means), std::move(c.stds));
        },
        "xhat"_a, "Channel correlation (zero diagonal), means and N-1 standard deviations.");
  m.def("propagate_stage2",
        [](const pcfi::Matrix& xhat, const pcfi::IntMatrix& spds, double alpha, double beta) {
          return pcfi::propagate_stage2(xhat, pcfi::SpdsMatrix{spds},
                                        pcfi::PropagationConfig{alpha, beta, {}});
        },
        "xhat"_a, "spds"_a, "alpha"_a = 0.8, "beta"_a = 1e-3);

  m.def("generate_synthetic",
        [](pcfi::NodeId num_nodes, int num_classes, int feature_dim, double intra, double inter,
           double scale, std::uint64_t seed) {
          pcfi::SynthSpec spec;
          spec.num_nodes = num_nodes;
          spec.num_classes = num_classes;
          spec.feature_dim = feature_dim;
          spec.intra_edge_prob = intra;
          spec.inter_edge_prob = inter;
          spec.gaussian_scale = scale;
          spec.seed = seed;
          pcfi::validate(spec);
          auto sg = pcfi::generate_graph(spec);
          auto x = pcfi::generate_features(sg.labels, num_classes, feature_dim, scale, seed);
          py::dict out;
          out["labels"] = sg.labels;
          out["features"] = std::move(x);
          out["fragmentation_warning"] = sg.fragmentation_warning;
          out["graph"] = std::move(sg.graph);
          return out;
        },
        "num_nodes"_a = 5000, "num_classes"_a = 10, "feature_dim"_a = 5, "intra"_a = 0.006,
        "inter"_a = 0.0003, "scale"_a = 0.01, "seed"_a = 0);
  m.def("feature_homophily",
        [](const pcfi::Graph& g, const pcfi::Matrix& x) {
          return pcfi::feature_homophily(g, x).value;
        },
        "graph"_a, "features"_a);
  m.def("class_homophily", &pcfi::class_homophily, "graph"_a, "labels"_a);

  m.def("_evaluate_json",
        [](const pcfi::Matrix& truth, const pcfi::Matrix& imputed, const pcfi::MaskMatrix& known,
           std::optional<pcfi::IntMatrix> spds) {
          std::optional<pcfi::SpdsMatrix> s;
          if (spds) s = pcfi::SpdsMatrix{std::move(*spds)};
          return pcfi::to_json(pcfi::evaluate(truth, imputed, known, s ? &*s : nullptr)).dump();
        },
        "truth"_a, "imputed"_a, "known"_a, "spds"_a = py::none());

  m.def("set_num_threads", &pcfi::set_num_threads, "n"_a, "Worker threads; 0 = automatic.");
  m.def("num_threads", &pcfi::num_threads);
}
