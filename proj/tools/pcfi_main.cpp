// pcfi: command-line front end for pseudo-confidence feature imputation.
//
//   pcfi mask      draw a structural or uniform missing pattern
//   pcfi impute    impute missing entries of a feature matrix on a graph
//   pcfi eval      score imputed features against ground truth
//   pcfi synth     generate a synthetic class-structured dataset
//   pcfi pipeline  mask -> impute (several methods) -> eval over seeds
//
// Exit codes: 0 success, 2 usage/validation, 3 I/O, 4 numerical invariant.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcfi/errors.hpp"
#include "pcfi/eval.hpp"
#include "pcfi/graph.hpp"
#include "pcfi/imputation.hpp"
#include "pcfi/io.hpp"
#include "pcfi/masking.hpp"
#include "pcfi/parallel.hpp"
#include "pcfi/pipeline.hpp"
#include "pcfi/report_json.hpp"
#include "pcfi/rng.hpp"
#include "pcfi/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kInvariant = 4 };

struct Logger {
  int level = 1;  // 0 quiet, 1 normal, 2 verbose

  void info(const std::string& msg) const {
    if (level >= 1) std::cerr << "pcfi: " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level >= 2) std::cerr << "pcfi: " << msg << '\n';
  }
  void warn(const std::string& msg) const {
    if (level >= 1) std::cerr << "pcfi: warning: " << msg << '\n';
  }
};

Logger g_log;
bool g_telemetry = false;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_json(const fs::path& path, const json& j) {
  pcfi::io::write_text(path, j.dump(2) + "\n");
}

// Graph plus features restricted to the largest component when requested.
struct LoadedInput {
  pcfi::Graph graph;
  pcfi::Matrix features;
  std::optional<pcfi::MaskMatrix> mask;
  std::optional<std::vector<pcfi::NodeId>> id_map;  // set when nodes were dropped
};

LoadedInput load_input(const fs::path& edges_path, const fs::path& features_path,
                       const std::optional<fs::path>& mask_path, bool header,
                       bool largest_component) {
  LoadedInput in;
  in.features = pcfi::io::read_matrix(features_path, header);
  const auto n = static_cast<pcfi::NodeId>(in.features.rows());
  const auto edges = pcfi::io::read_edges(edges_path);
  in.graph = pcfi::build_graph(edges, n);
  if (mask_path) {
    in.mask = pcfi::io::read_mask(*mask_path, header);
    if (in.mask->rows() != in.features.rows() || in.mask->cols() != in.features.cols()) {
      std::ostringstream os;
      os << "mask " << in.mask->rows() << "x" << in.mask->cols()
         << " does not match features " << in.features.rows() << "x"
         << in.features.cols();
      throw pcfi::InputError(os.str());
    }
  }
  g_log.debug("loaded " + std::to_string(n) + " nodes, " +
              std::to_string(in.graph.num_edges()) + " edges, " +
              std::to_string(in.features.cols()) + " channels");
  if (!largest_component) return in;
  const auto cc = pcfi::connected_components(in.graph);
  if (cc.num_components <= 1) return in;
  auto lcc = pcfi::extract_largest_component(in.graph);
  g_log.info("graph has " + std::to_string(cc.num_components) +
             " components; keeping the largest (" +
             std::to_string(lcc.graph.num_nodes()) + " of " + std::to_string(n) +
             " nodes)");
  in.features = pcfi::select_rows(in.features, lcc.id_map);
  if (in.mask) in.mask = pcfi::select_rows(*in.mask, lcc.id_map);
  in.graph = std::move(lcc.graph);
  in.id_map = std::move(lcc.id_map);
  return in;
}

bool parse_components(const std::string& s) {
  if (s == "largest") return true;
  if (s == "all") return false;
  throw pcfi::InputError("--components must be 'largest' or 'all'");
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  auto parse_one = [&](const std::string& tok) -> std::uint64_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) {
      throw pcfi::InputError("invalid seed '" + tok + "'");
    }
    return v;
  };
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto lo = parse_one(item.substr(0, dash));
      const auto hi = parse_one(item.substr(dash + 1));
      if (hi < lo) throw pcfi::InputError("empty seed range '" + item + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_one(item));
    }
  }
  if (out.empty()) throw pcfi::InputError("no seeds given");
  return out;
}

// ---- mask -----------------------------------------------------------------

struct MaskArgs {
  std::string type;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::optional<long long> num_nodes;
  std::optional<long long> num_features;
  std::optional<std::string> features_file;
  bool header = false;
  std::string out;
};

void setup_mask(CLI::App& app, MaskArgs& a) {
  auto* cmd = app.add_subcommand("mask", "Draw a missing-feature pattern");
  cmd->add_option("--type", a.type, "structural or uniform")->required();
  cmd->add_option("--rate", a.rate, "missing rate r_m in (0, 1)")->required();
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--num-nodes", a.num_nodes, "number of nodes N");
  cmd->add_option("--num-features", a.num_features, "number of channels F");
  cmd->add_option("--features-file", a.features_file, "take N x F from this CSV");
  cmd->add_flag("--header", a.header, "skip one header line in input CSVs");
  cmd->add_option("--out", a.out, "output mask CSV ('-' for stdout)")->required();
}

int run_mask(const MaskArgs& a) {
  const auto kind = pcfi::parse_mask_kind(a.type);
  Eigen::Index n = 0;
  Eigen::Index f = 0;
  if (a.features_file) {
    const auto x = pcfi::io::read_matrix(*a.features_file, a.header);
    n = x.rows();
    f = x.cols();
  } else {
    if (!a.num_nodes || !a.num_features) {
      throw pcfi::InputError("give --features-file or both --num-nodes and --num-features");
    }
    if (*a.num_nodes < 1 || *a.num_features < 1) {
      throw pcfi::InputError("--num-nodes and --num-features must be positive");
    }
    n = *a.num_nodes;
    f = *a.num_features;
  }
  const auto mask = pcfi::make_mask({kind, a.rate, a.seed}, n, f);
  pcfi::io::write_mask(a.out, mask);
  g_log.debug("masked " + std::to_string((!mask.array()).count()) + " of " +
              std::to_string(n * f) + " entries");
  return kOk;
}

// ---- impute ---------------------------------------------------------------

struct ImputeArgs {
  std::string edges, features, mask, out;
  std::optional<std::string> report;
  std::optional<std::string> spds_out;
  bool header = false;
  double alpha = 0.8;
  double beta = 1e-3;
  int k = 100;
  std::string method = "pcfi";
  std::string mode = "iterative";
  bool lenient = false;
  std::optional<double> tolerance;
  std::optional<double> receiver_alpha;
  std::string components = "largest";
};

void setup_impute(CLI::App& app, ImputeArgs& a) {
  auto* cmd = app.add_subcommand("impute", "Impute missing node features");
  cmd->add_option("--edges", a.edges, "edge list (two ids per line)")->required();
  cmd->add_option("--features", a.features, "N x F feature CSV")->required();
  cmd->add_option("--mask", a.mask, "N x F 0/1 mask CSV (1 = observed)")->required();
  cmd->add_option("--out", a.out, "imputed feature CSV ('-' for stdout)")->required();
  cmd->add_option("--report", a.report, "side-car JSON (default: <out>.json)");
  cmd->add_option("--spds-out", a.spds_out, "also write the SPD-S matrix as CSV");
  cmd->add_flag("--header", a.header, "skip one header line in input CSVs");
  cmd->add_option("--alpha", a.alpha, "pseudo-confidence base in (0, 1)");
  cmd->add_option("--beta", a.beta, "inter-channel propagation scale (>= 0)");
  cmd->add_option("--k", a.k, "diffusion steps");
  cmd->add_option("--method", a.method, "pcfi, pcfi_stage1_only, fp or zero");
  cmd->add_option("--mode", a.mode, "iterative or closed_form");
  cmd->add_flag("--lenient", a.lenient, "zero-fill channels without a source");
  cmd->add_option("--tolerance", a.tolerance, "stop diffusion early below this change");
  cmd->add_option("--receiver-alpha", a.receiver_alpha,
                  "separate base for the stage-2 receiver gate");
  cmd->add_option("--components", a.components, "largest (default) or all");
}

int run_impute(const ImputeArgs& a) {
  Stopwatch clock;
  pcfi::ImputationConfig config;
  config.alpha = a.alpha;
  config.beta = a.beta;
  config.steps = a.k;
  config.method = pcfi::parse_method(a.method);
  config.mode = pcfi::parse_diffusion_mode(a.mode);
  config.lenient = a.lenient;
  config.tolerance = a.tolerance;
  config.receiver_alpha = a.receiver_alpha;
  pcfi::validate(config);

  auto in = load_input(a.edges, a.features, fs::path(a.mask), a.header,
                       parse_components(a.components));
  const auto fset = pcfi::apply_mask(in.features, *in.mask);
  const auto result = pcfi::impute(in.graph, fset, config);
  if (!result.flagged_channels.empty()) {
    std::ostringstream os;
    os << "channels without a reachable source (zero-filled):";
    for (int c : result.flagged_channels) os << ' ' << c;
    g_log.warn(os.str());
  }
  pcfi::io::write_matrix(a.out, result.imputed);
  if (a.spds_out) pcfi::io::write_spds(*a.spds_out, result.spds);

  std::optional<fs::path> report_path;
  if (a.report) {
    report_path = *a.report;
  } else if (a.out != "-") {
    report_path = a.out + ".json";
  }
  if (report_path) {
    json residuals = json::array();
    for (double r : result.residuals) residuals.push_back(pcfi::json_number(r));
    json report = {{"schema_version", pcfi::kReportSchemaVersion},
                   {"kind", "impute"},
                   {"config", pcfi::to_json(config)},
                   {"num_nodes", result.imputed.rows()},
                   {"num_channels", result.imputed.cols()},
                   {"flagged_channels", result.flagged_channels},
                   {"steps_run", result.steps_run},
                   {"residuals", std::move(residuals)}};
    report["id_map"] = in.id_map ? json(*in.id_map) : json(nullptr);
    if (g_telemetry) report["telemetry"] = {{"seconds", clock.seconds()}};
    write_json(*report_path, report);
  }
  return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string truth, imputed, mask, report;
  std::optional<std::string> spds;
  bool header = false;
};

void setup_eval(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "Score imputed features against ground truth");
  cmd->add_option("--truth", a.truth, "ground-truth feature CSV")->required();
  cmd->add_option("--imputed", a.imputed, "imputed feature CSV")->required();
  cmd->add_option("--mask", a.mask, "mask CSV used for imputation")->required();
  cmd->add_option("--spds", a.spds, "SPD-S CSV for bucketed cosine similarity");
  cmd->add_option("--report", a.report, "report JSON ('-' for stdout)")->required();
  cmd->add_flag("--header", a.header, "skip one header line in input CSVs");
}

int run_eval(const EvalArgs& a) {
  Stopwatch clock;
  const auto truth = pcfi::io::read_matrix(a.truth, a.header);
  const auto imputed = pcfi::io::read_matrix(a.imputed, a.header);
  const auto mask = pcfi::io::read_mask(a.mask, a.header);
  std::optional<pcfi::SpdsMatrix> spds;
  if (a.spds) spds = pcfi::io::read_spds(*a.spds, a.header);
  const auto eval = pcfi::evaluate(truth, imputed, mask, spds ? &*spds : nullptr);
  if (eval.cosine_skipped > 0) {
    g_log.info(std::to_string(eval.cosine_skipped) +
               " node(s) skipped for cosine similarity (zero-norm rows)");
  }
  json report = {{"schema_version", pcfi::kReportSchemaVersion}, {"kind", "eval"}};
  report.update(pcfi::to_json(eval));
  if (g_telemetry) report["telemetry"] = {{"seconds", clock.seconds()}};
  write_json(a.report, report);
  return kOk;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  pcfi::SynthSpec spec;
};

void setup_synth(CLI::App& app, SynthArgs& a) {
  auto* cmd = app.add_subcommand("synth", "Generate a synthetic dataset directory");
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->add_option("--num-nodes", a.spec.num_nodes, "nodes before component extraction");
  cmd->add_option("--classes", a.spec.num_classes, "number of classes C");
  cmd->add_option("--features", a.spec.feature_dim, "feature dimension F");
  cmd->add_option("--intra", a.spec.intra_edge_prob, "intra-class edge probability");
  cmd->add_option("--inter", a.spec.inter_edge_prob, "inter-class edge probability");
  cmd->add_option("--scale", a.spec.gaussian_scale, "Gaussian covariance scale");
  cmd->add_option("--seed", a.spec.seed, "RNG seed");
  cmd->add_flag("--strict-simplex", a.spec.strict_equidistant,
                "require exactly equidistant class means");
}

int run_synth(const SynthArgs& a) {
  pcfi::validate(a.spec);
  const auto sg = pcfi::generate_graph(a.spec);
  pcfi::ClassMeans means;
  const auto x = pcfi::generate_features(sg.labels, a.spec.num_classes, a.spec.feature_dim,
                                         a.spec.gaussian_scale, a.spec.seed,
                                         a.spec.strict_equidistant, &means);
  if (sg.fragmentation_warning) {
    std::ostringstream os;
    os << "graph fragments (expected degree " << pcfi::io::format_double(sg.expected_degree)
       << "); kept the largest component with " << sg.graph.num_nodes() << " of "
       << sg.sampled_nodes << " nodes";
    g_log.warn(os.str());
  }

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw pcfi::IoError("cannot create directory '" + a.out + "': " + ec.message());
  const fs::path dir(a.out);
  pcfi::io::write_edges(dir / "edges.tsv", sg.graph);
  pcfi::io::write_matrix(dir / "features.csv", x);
  pcfi::io::write_labels(dir / "labels.csv", sg.labels);

  json class_h = nullptr;
  json feature_h = nullptr;
  if (sg.graph.num_edges() > 0) {
    class_h = pcfi::json_number(pcfi::class_homophily(sg.graph, sg.labels));
    const auto h = pcfi::feature_homophily(sg.graph, x);
    feature_h = {{"value", pcfi::json_number(h.value)},
                 {"edges_used", h.edges_used},
                 {"edges_skipped", h.edges_skipped}};
  }
  const auto& s = a.spec;
  json meta = {
      {"schema_version", pcfi::kReportSchemaVersion},
      {"kind", "synth"},
      {"spec",
       {{"num_nodes", s.num_nodes},
        {"num_classes", s.num_classes},
        {"feature_dim", s.feature_dim},
        {"intra_edge_prob", s.intra_edge_prob},
        {"inter_edge_prob", s.inter_edge_prob},
        {"gaussian_scale", s.gaussian_scale},
        {"seed", s.seed},
        {"strict_equidistant", s.strict_equidistant}}},
      {"rng", pcfi::Rng::kAlgorithm},
      {"num_nodes", sg.graph.num_nodes()},
      {"sampled_nodes", sg.sampled_nodes},
      {"num_edges", sg.graph.num_edges()},
      {"expected_degree", pcfi::json_number(sg.expected_degree)},
      {"fragmentation_warning", sg.fragmentation_warning},
      {"class_homophily", {{"value", class_h}, {"definition", "edge_fraction"}}},
      {"feature_homophily", feature_h},
      {"feature_homophily_metric", "mean_edge_cosine"},
      {"class_means",
       {{"equidistant", means.equidistant},
        {"min_distance", pcfi::json_number(means.min_distance)},
        {"max_distance", pcfi::json_number(means.max_distance)}}},
  };
  write_json(dir / "meta.json", meta);
  return kOk;
}

// ---- pipeline -------------------------------------------------------------

struct PipelineArgs {
  std::optional<std::string> dataset, edges, features;
  bool header = false;
  std::string mask_type = "structural";
  double rate = 0.9;
  std::string seeds = "0";
  std::vector<std::string> methods{"pcfi", "fp", "zero"};
  double alpha = 0.8;
  double beta = 1e-3;
  int k = 100;
  std::string mode = "iterative";
  bool lenient = false;
  std::optional<double> tolerance;
  std::string components = "largest";
  std::string report;
};

void setup_pipeline(CLI::App& app, PipelineArgs& a) {
  auto* cmd = app.add_subcommand("pipeline", "Mask, impute with several methods, evaluate");
  cmd->add_option("--dataset", a.dataset, "directory with edges.tsv and features.csv");
  cmd->add_option("--edges", a.edges, "edge list (instead of --dataset)");
  cmd->add_option("--features", a.features, "feature CSV (instead of --dataset)");
  cmd->add_flag("--header", a.header, "skip one header line in the feature CSV");
  cmd->add_option("--mask-type", a.mask_type, "structural or uniform");
  cmd->add_option("--rate", a.rate, "missing rate r_m in (0, 1)");
  cmd->add_option("--seeds", a.seeds, "seeds, e.g. '1-10' or '1,4,7'");
  cmd->add_option("--methods", a.methods, "comma separated methods")->delimiter(',');
  cmd->add_option("--alpha", a.alpha, "pseudo-confidence base in (0, 1)");
  cmd->add_option("--beta", a.beta, "inter-channel propagation scale (>= 0)");
  cmd->add_option("--k", a.k, "diffusion steps");
  cmd->add_option("--mode", a.mode, "iterative or closed_form");
  cmd->add_flag("--lenient", a.lenient, "zero-fill channels without a source");
  cmd->add_option("--tolerance", a.tolerance, "stop diffusion early below this change");
  cmd->add_option("--components", a.components, "largest (default) or all");
  cmd->add_option("--report", a.report, "report JSON ('-' for stdout)")->required();
}

int run_pipeline(const PipelineArgs& a) {
  Stopwatch clock;
  fs::path edges;
  fs::path features;
  if (a.dataset) {
    if (a.edges || a.features) {
      throw pcfi::InputError("give either --dataset or --edges/--features, not both");
    }
    edges = fs::path(*a.dataset) / "edges.tsv";
    features = fs::path(*a.dataset) / "features.csv";
  } else {
    if (!a.edges || !a.features) {
      throw pcfi::InputError("give --dataset or both --edges and --features");
    }
    edges = *a.edges;
    features = *a.features;
  }

  pcfi::PipelineConfig config;
  config.mask_kind = pcfi::parse_mask_kind(a.mask_type);
  config.rate = a.rate;
  config.seeds = parse_seeds(a.seeds);
  config.methods.clear();
  for (const auto& m : a.methods) config.methods.push_back(pcfi::parse_method(m));
  config.imputation.alpha = a.alpha;
  config.imputation.beta = a.beta;
  config.imputation.steps = a.k;
  config.imputation.mode = pcfi::parse_diffusion_mode(a.mode);
  config.imputation.lenient = a.lenient;
  config.imputation.tolerance = a.tolerance;

  const auto in = load_input(edges, features, std::nullopt, a.header,
                             parse_components(a.components));
  const auto result = pcfi::run_pipeline(in.graph, in.features, config);
  for (const auto& agg : result.aggregates) {
    std::ostringstream os;
    os << "method " << pcfi::to_string(agg.method) << ": rmse " << pcfi::io::format_double(agg.rmse_mean)
       << " +- " << pcfi::io::format_double(agg.rmse_std) << ", cosine "
       << pcfi::io::format_double(agg.cosine_mean);
    g_log.info(os.str());
  }
  json report = pcfi::to_json(result);
  report["num_nodes"] = in.graph.num_nodes();
  report["num_channels"] = in.features.cols();
  report["largest_component_only"] = in.id_map.has_value();
  if (g_telemetry) report["telemetry"] = {{"seconds", clock.seconds()}};
  write_json(a.report, report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-confidence based imputation of missing node features"};
  app.require_subcommand(1);
  bool quiet = false;
  bool verbose = false;
  std::optional<std::size_t> threads;
  app.add_flag("--quiet", quiet, "only report errors");
  app.add_flag("--verbose", verbose, "extra progress output on stderr");
  app.add_flag("--telemetry", g_telemetry, "add wall-clock timings to reports");
  app.add_option("--threads", threads, "worker threads (0 = auto; overrides PCFI_THREADS)");

  MaskArgs mask_args;
  ImputeArgs impute_args;
  EvalArgs eval_args;
  SynthArgs synth_args;
  PipelineArgs pipeline_args;
  setup_mask(app, mask_args);
  setup_impute(app, impute_args);
  setup_eval(app, eval_args);
  setup_synth(app, synth_args);
  setup_pipeline(app, pipeline_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  g_log.level = quiet ? 0 : (verbose ? 2 : 1);
  if (threads) pcfi::set_num_threads(*threads);

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "mask") return run_mask(mask_args);
    if (name == "impute") return run_impute(impute_args);
    if (name == "eval") return run_eval(eval_args);
    if (name == "synth") return run_synth(synth_args);
    if (name == "pipeline") return run_pipeline(pipeline_args);
  } catch (const pcfi::IoError& e) {
    std::cerr << "pcfi: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const pcfi::InvariantError& e) {
    std::cerr << "pcfi: numerical invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const pcfi::InputError& e) {
    std::cerr << "pcfi: error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pcfi: unexpected error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
