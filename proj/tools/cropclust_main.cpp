// Command-line front end: cluster, eval, synth, bench.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cropclust/bench.hpp"
#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/eval.hpp"
#include "cropclust/ply.hpp"
#include "cropclust/report.hpp"
#include "cropclust/sweep.hpp"
#include "cropclust/synth.hpp"

namespace {

using namespace cropclust;
using nlohmann::json;

constexpr std::size_t kDefaultK = 1200;
constexpr double kDefaultBeta = 0.3;

struct ClusterArgs {
  std::string input;
  std::string output;
  std::string algo;
  std::optional<double> d;
  std::optional<std::size_t> k;
  std::optional<double> beta;
  std::string sweep;
  std::string truth;
  std::string report;
  bool binary = false;
  bool ignore_ground = true;
  bool distinct_colors = false;
  unsigned threads = 0;
};

struct EvalArgs {
  std::string predicted;
  std::string truth;
  std::string report;
  bool ignore_ground = true;
  bool distinct_colors = false;
};

struct SynthArgs {
  std::string output;
  std::string config;
  std::vector<std::string> settings;
  std::optional<std::size_t> rows, cols, points_per_plant;
  std::optional<double> double_plant_prob;
  std::optional<std::uint64_t> seed;
  bool binary = false;
  unsigned threads = 0;
};

struct BenchArgs {
  std::vector<std::size_t> sizes;
  std::string algo = "gdqspp";
  std::optional<double> d;
  std::optional<std::size_t> k;
  std::optional<double> beta;
  std::size_t repeats = 3;
  unsigned threads = 0;
};

// Builds Params from the flags the user actually passed. Defaults for k and
// beta apply only to algorithms that take them; anything else the user
// passes is left in so validate_params rejects it.
Params make_params(const std::string& algo, std::optional<double> d, std::optional<std::size_t> k,
                   std::optional<double> beta) {
  Params params;
  params.algorithm = parse_algorithm(algo);
  params.d = d;
  params.k = k;
  params.beta = beta;
  const bool wants_k = params.algorithm == Algorithm::kGdQuickshift ||
                       params.algorithm == Algorithm::kGdQuickshiftPlusPlus;
  if (wants_k && !params.k) params.k = kDefaultK;
  if (params.algorithm == Algorithm::kGdQuickshiftPlusPlus && !params.beta) params.beta = kDefaultBeta;
  return params;
}

json params_json(const Params& params) {
  json j = json::object();
  j["algorithm"] = std::string(algorithm_name(params.algorithm));
  if (params.d) j["d"] = *params.d;
  if (params.k) j["k"] = *params.k;
  if (params.beta) j["beta"] = *params.beta;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

PlyReadOptions read_options(bool distinct_colors) {
  PlyReadOptions o;
  o.color_labels = distinct_colors ? ColorLabels::kDistinct : ColorLabels::kPalette;
  return o;
}

const Labeling& require_labels(const PointCloud& cloud, const std::string& path) {
  if (!cloud.labels) throw DataError("'" + path + "' carries no labels (no color or label property)");
  return *cloud.labels;
}

std::size_t count_clusters(const Labeling& labels) {
  std::uint32_t max = 0;
  for (std::uint32_t l : labels) max = std::max(max, l);
  return max;
}

int run_cluster(const ClusterArgs& args) {
  const bool sweeping = !args.sweep.empty();
  if (sweeping && args.d) throw ParameterError("--d and --sweep-d are mutually exclusive");
  Params params = make_params(args.algo, args.d, args.k, args.beta);
  std::vector<double> ds;
  if (sweeping) {
    ds = parse_sweep_range(args.sweep);
    params.d = ds.front();
  }
  validate_params(params);
  const PlyFormat format = args.binary ? PlyFormat::kBinaryLittleEndian : PlyFormat::kAscii;
  const RunOptions options{args.threads};

  const PointCloud cloud = load_ply(args.input, read_options(args.distinct_colors));
  std::optional<Labeling> truth;
  if (!args.truth.empty()) {
    truth = require_labels(load_ply(args.truth, read_options(args.distinct_colors)), args.truth);
  } else if (sweeping) {
    truth = require_labels(cloud, args.input);
  }

  json report = {{"schema", kReportSchema}, {"num_points", cloud.size()}};

  if (sweeping) {
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = sweep_d(cloud, params, ds, *truth, args.ignore_ground, options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json runs = json::array();
    std::printf("%-12s %10s %10s %10s %s\n", "d", "clusters", "mean_iou", "median_iou", "within_20%");
    for (const SweepRun& run : result.runs) {
      std::printf("%-12g %10zu %10.4f %10.4f %s\n", run.d, run.match.num_predicted,
                  run.match.mean_iou, run.match.median_iou, run.within_bound ? "yes" : "no");
      runs.push_back({{"d", run.d},
                      {"num_predicted", run.match.num_predicted},
                      {"mean_iou", run.match.mean_iou},
                      {"median_iou", run.match.median_iou},
                      {"within_bound", run.within_bound}});
    }
    report["sweep"] = runs;
    if (!result.best) {
      throw DataError("no sweep run produced a cluster count within 20% of the truth count");
    }
    const SweepRun& best = result.runs[*result.best];
    params.d = best.d;
    save_ply(cloud, result.best_labeling, args.output, format);
    std::printf("best d: %g\nclusters: %zu\ntime: %.3f s\n", best.d,
                count_clusters(result.best_labeling), seconds);
    report["params"] = params_json(params);
    report["num_clusters"] = count_clusters(result.best_labeling);
    report["eval"] = eval_report(best.match, count_report(result.best_labeling, *truth));
  } else {
    const auto start = std::chrono::steady_clock::now();
    const Labeling labels = cluster(cloud, params, options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    save_ply(cloud, labels, args.output, format);
    std::printf("clusters: %zu\ntime: %.3f s\n", count_clusters(labels), seconds);
    report["params"] = params_json(params);
    report["num_clusters"] = count_clusters(labels);
    if (truth) {
      if (truth->size() != labels.size()) throw DataError("truth cloud has a different point count");
      report["eval"] = eval_report(match_clusters(labels, *truth, args.ignore_ground),
                                   count_report(labels, *truth));
    }
  }
  if (!args.report.empty()) write_text(args.report, report.dump(2) + "\n");
  return 0;
}

int run_eval(const EvalArgs& args) {
  const PointCloud predicted = load_ply(args.predicted);
  const PointCloud truth = load_ply(args.truth, read_options(args.distinct_colors));
  const Labeling& p = require_labels(predicted, args.predicted);
  const Labeling& t = require_labels(truth, args.truth);
  if (p.size() != t.size()) {
    throw DataError("predicted and truth clouds have " + std::to_string(p.size()) + " and " +
                    std::to_string(t.size()) + " points");
  }
  const std::string text =
      eval_report(match_clusters(p, t, args.ignore_ground), count_report(p, t)).dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!args.report.empty()) write_text(args.report, text);
  return 0;
}

int run_synth(const SynthArgs& args) {
  FieldSpec spec = args.config.empty() ? FieldSpec{} : load_field_config(args.config);
  for (const std::string& setting : args.settings) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + setting + "'");
    set_field_value(spec, setting.substr(0, eq), setting.substr(eq + 1));
  }
  if (args.rows) spec.rows = *args.rows;
  if (args.cols) spec.cols = *args.cols;
  if (args.points_per_plant) spec.points_per_plant = *args.points_per_plant;
  if (args.double_plant_prob) spec.double_plant_prob = *args.double_plant_prob;
  if (args.seed) spec.seed = *args.seed;
  validate(spec);

  const SyntheticField field = generate_field(spec, args.threads);
  save_ply(field.cloud, *field.cloud.labels, args.output,
           args.binary ? PlyFormat::kBinaryLittleEndian : PlyFormat::kAscii);
  std::printf("plants: %zu\npoints: %zu\n", field.num_plants, field.cloud.size());
  return 0;
}

int run_bench_cmd(const BenchArgs& args) {
  std::vector<std::size_t> sizes = args.sizes;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ParameterError("--sizes must be strictly ascending");
  }
  const Params params = make_params(args.algo, args.d, args.k, args.beta);
  validate_params(params);
  const std::vector<BenchRow> rows = run_bench(sizes, params, args.repeats, RunOptions{args.threads});
  std::printf("# algorithm %s, time = median of %zu repeats of cluster() excluding I/O\n",
              std::string(algorithm_name(params.algorithm)).c_str(), args.repeats);
  std::printf("%10s %10s %10s %12s %8s\n", "n", "points", "clusters", "seconds", "ratio");
  for (const BenchRow& row : rows) {
    if (row.ratio) {
      std::printf("%10zu %10zu %10zu %12.4f %8.3f\n", row.requested, row.points, row.clusters,
                  row.median_seconds, *row.ratio);
    } else {
      std::printf("%10zu %10zu %10zu %12.4f %8s\n", row.requested, row.points, row.clusters,
                  row.median_seconds, "-");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-based pre-clustering of crop-field point clouds"};
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a PLY point cloud");
  cluster_cmd->add_option("input", cluster_args.input, "Input PLY")->required();
  cluster_cmd->add_option("output", cluster_args.output, "Output PLY colored by cluster")->required();
  cluster_cmd->add_option("--algo", cluster_args.algo, "rain | zqs | gdqs | gdqspp")->required();
  cluster_cmd->add_option("--d", cluster_args.d, "Neighborhood distance (rain, zqs, gdqs)");
  cluster_cmd->add_option("--k", cluster_args.k, "Density kernel size (gdqs, gdqspp; default 1200)");
  cluster_cmd->add_option("--beta", cluster_args.beta, "Core threshold in [0,1] (gdqspp; default 0.3)");
  cluster_cmd->add_option("--sweep-d", cluster_args.sweep,
                          "start:stop:step; keep the best run within 20% of the truth count");
  cluster_cmd->add_option("--truth", cluster_args.truth, "Labeled truth PLY for evaluation");
  cluster_cmd->add_option("--report", cluster_args.report, "Write a JSON report here");
  cluster_cmd->add_flag("--binary", cluster_args.binary, "Write binary_little_endian PLY");
  cluster_cmd->add_flag("--ignore-ground,!--keep-ground", cluster_args.ignore_ground,
                        "Leave truth label 0 out of IoU matching (default on)");
  cluster_cmd->add_flag("--distinct-colors", cluster_args.distinct_colors,
                        "Read truth labels as one label per distinct RGB color");
  cluster_cmd->add_option("--threads", cluster_args.threads, "Worker threads (0 = all cores)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Match predicted clusters against ground truth");
  eval_cmd->add_option("predicted", eval_args.predicted, "Predicted labeled PLY")->required();
  eval_cmd->add_option("truth", eval_args.truth, "Ground-truth labeled PLY")->required();
  eval_cmd->add_option("--report", eval_args.report, "Also write the JSON report here");
  eval_cmd->add_flag("--ignore-ground,!--keep-ground", eval_args.ignore_ground,
                     "Leave truth label 0 out of IoU matching (default on)");
  eval_cmd->add_flag("--distinct-colors", eval_args.distinct_colors,
                     "Read truth labels as one label per distinct RGB color");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic field");
  synth_cmd->add_option("output", synth_args.output, "Output PLY")->required();
  synth_cmd->add_option("--config", synth_args.config, "Field spec file (key = value lines)");
  synth_cmd->add_option("--set", synth_args.settings, "Override a field spec key: key=value");
  synth_cmd->add_option("--rows", synth_args.rows, "Plant rows");
  synth_cmd->add_option("--cols", synth_args.cols, "Plants per row");
  synth_cmd->add_option("--points-per-plant", synth_args.points_per_plant, "Points per plant");
  synth_cmd->add_option("--double-plant-prob", synth_args.double_plant_prob,
                        "Probability of a double planting per position");
  synth_cmd->add_option("--seed", synth_args.seed, "Random seed");
  synth_cmd->add_flag("--binary", synth_args.binary, "Write binary_little_endian PLY");
  synth_cmd->add_option("--threads", synth_args.threads, "Worker threads (0 = all cores)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time clustering on growing synthetic fields");
  bench_cmd->add_option("--sizes", bench_args.sizes, "Point counts, ascending")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--algo", bench_args.algo, "rain | zqs | gdqs | gdqspp");
  bench_cmd->add_option("--d", bench_args.d, "Neighborhood distance");
  bench_cmd->add_option("--k", bench_args.k, "Density kernel size");
  bench_cmd->add_option("--beta", bench_args.beta, "Core threshold");
  bench_cmd->add_option("--repeats", bench_args.repeats, "Timed runs per size (median)");
  bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cluster_cmd->parsed()) return run_cluster(cluster_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (bench_cmd->parsed()) return run_bench_cmd(bench_args);
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
