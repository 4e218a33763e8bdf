#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cliqueloop/compat_graph.hpp"
#include "cliqueloop/error.hpp"
#include "cliqueloop/hamming_tree.hpp"
#include "cliqueloop/io.hpp"
#include "cliqueloop/matching.hpp"
#include "cliqueloop/synth.hpp"
#include "cliqueloop/verification.hpp"

namespace cliqueloop::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidParams:
    case ErrorCode::NonPositiveEpsilon:
    case ErrorCode::DomainError:
      return kExitParams;
    default:
      return kExitIo;
  }
}

struct GenArgs {
  int dim = 3;
  std::size_t inliers = 30;
  std::size_t outliers = 70;
  double sigma = 0.05;
  double extent = 50.0;
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct VerifyArgs {
  std::string corr;
  std::string method = "clique";
  int dim = 3;
  double epsilon = kDefaultEpsilon;
  std::optional<std::size_t> min_inliers;
  std::optional<std::uint64_t> budget;
  int iterations = kDefaultRansacIterations;
  std::optional<double> inlier_tol;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool no_timing = false;
  std::string graph_dump;
};

struct MatchArgs {
  std::string query_desc;
  std::string ref_desc;
  std::string query_pts;
  std::string ref_pts;
  int tau = kDefaultHammingThreshold;
  bool mutual = false;
  bool exhaustive = false;
  std::size_t leaf_capacity = HammingTree::kDefaultLeafCapacity;
  std::string out = "-";
};

struct BenchArgs {
  std::vector<double> ratios{0.0, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> sigmas{0.0, 0.05, 0.2};
  std::vector<std::string> methods{"clique", "ransac", "ransac:auto"};
  std::size_t trials = 100;
  std::size_t correspondences = 100;
  int dim = 3;
  double epsilon = kDefaultEpsilon;
  double extent = 50.0;
  std::optional<double> inlier_tol;
  std::optional<std::size_t> min_inliers;
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out = "report.csv";
  std::string json;
  bool verbose = false;
  bool no_timing = false;
};

int cmd_gen(const GenArgs& a) {
  SceneSpec spec;
  spec.dim = a.dim;
  spec.n_inliers = a.inliers;
  spec.n_outliers = a.outliers;
  spec.noise_sigma = a.sigma;
  spec.extent = a.extent;
  spec.seed = a.seed;
  const Scene scene = gen_scene(spec);
  io::write_scene(a.out, scene);
  std::cerr << "wrote " << scene.correspondences.size() << " correspondences to "
            << a.out << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a) {
  if (a.method == "ransac" && a.budget) {
    throw Error(ErrorCode::InvalidParams, "--budget applies to the clique method only");
  }
  const CorrespondenceSet corr = io::read_correspondences(a.corr, a.dim);

  VerificationParams params;
  params.epsilon = a.epsilon;
  params.min_inliers = a.min_inliers;
  params.clique_budget = a.budget;
  params.threads = a.threads;
  params.record_timing = !a.no_timing;
  if (params.min_inliers && *params.min_inliers == 0) {
    throw Error(ErrorCode::InvalidParams, "--min-inliers must be positive");
  }

  VerificationResult result;
  if (a.method == "clique") {
    result = verify_clique(corr, params);
    if (!a.graph_dump.empty()) {
      auto out = io::open_output(a.graph_dump);
      write_graph_dump(out, build_graph(corr, params.epsilon, params.threads).adjacency);
    }
  } else {
    if (!(a.epsilon > 0.0)) {
      throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
    }
    RansacParams rp;
    rp.iterations = a.iterations;
    rp.inlier_tol = a.inlier_tol.value_or(a.epsilon);
    rp.seed = a.seed;
    if (rp.iterations < 1 || !(rp.inlier_tol > 0.0)) {
      throw Error(ErrorCode::InvalidParams, "iterations and inlier tolerance must be positive");
    }
    try {
      result = verify_ransac(corr, rp, params);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewCorrespondences) throw;
      result.method = Method::Ransac;
      result.inliers = CorrespondenceSet(corr.dim());
      result.diagnostic = "too_few_correspondences";
    }
  }
  std::cout << io::result_to_json(result) << '\n';
  return result.accepted ? kExitOk : kExitRejected;
}

int cmd_match(const MatchArgs& a) {
  const NPointSet ref_pts = io::read_points(a.ref_pts);
  const NPointSet query_pts = io::read_points(a.query_pts, ref_pts.dim());
  const auto ref_desc = io::read_descriptors(a.ref_desc);
  const auto query_desc = io::read_descriptors(a.query_desc);

  MapFeatures query{query_pts, {}};
  if (query_desc.size() != query_pts.size()) {
    throw Error(ErrorCode::SizeMismatch,
                std::to_string(query_desc.size()) + " query descriptors for " +
                    std::to_string(query_pts.size()) + " query points");
  }
  // Query descriptors are assigned to keypoints by their id column.
  std::vector<const DescriptorEntry*> by_keypoint(query_pts.size(), nullptr);
  for (const auto& e : query_desc) {
    if (e.keypoint_id >= query_pts.size() || by_keypoint[e.keypoint_id] != nullptr) {
      throw Error(ErrorCode::ParseError, "query descriptor ids must cover each point once");
    }
    by_keypoint[e.keypoint_id] = &e;
  }
  for (const auto* e : by_keypoint) query.descriptors.push_back(e->descriptor);

  const std::size_t bits = !ref_desc.empty()     ? ref_desc.front().descriptor.size()
                           : !query_desc.empty() ? query_desc.front().descriptor.size()
                                                 : 8;
  HammingTree tree(bits, a.leaf_capacity);
  for (const auto& e : ref_desc) tree.insert(e);
  for (const auto& e : ref_desc) {
    if (e.keypoint_id >= ref_pts.size()) {
      throw Error(ErrorCode::ParseError, "reference descriptor id " +
                                             std::to_string(e.keypoint_id) +
                                             " has no reference point");
    }
  }

  MatchOptions options;
  options.tau = a.tau;
  options.mutual = a.mutual;
  options.exhaustive = a.exhaustive;
  const CorrespondenceSet corr = match_maps(query, tree, ref_pts, options);

  if (a.out == "-") {
    io::write_correspondences(std::cout, corr);
  } else {
    auto out = io::open_output(a.out);
    io::write_correspondences(out, corr);
  }
  std::cerr << corr.size() << " correspondences\n";
  return kExitOk;
}

int cmd_bench(const BenchArgs& a) {
  SweepConfig cfg;
  cfg.outlier_ratios = a.ratios;
  cfg.sigmas = a.sigmas;
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(MethodSpec::parse(m, a.dim));
  cfg.trials = a.trials;
  cfg.correspondences = a.correspondences;
  cfg.dim = a.dim;
  cfg.epsilon = a.epsilon;
  cfg.extent = a.extent;
  cfg.ransac_inlier_tol = a.inlier_tol;
  cfg.min_inliers = a.min_inliers;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.record_timing = !a.no_timing;

  const SweepReport report = run_sweep(cfg, [](std::size_t done, std::size_t total) {
    std::cerr << "[bench] cell " << done << '/' << total << '\n';
  });
  {
    auto out = io::open_output(a.out);
    write_report_csv(out, report);
  }
  if (!a.json.empty()) {
    auto out = io::open_output(a.json);
    write_report_json(out, report, a.verbose);
  }
  std::cerr << "[bench] wrote " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Deterministic loop-closure verification by maximum-clique search"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a planted synthetic scene");
  gen_cmd->add_option("--dim", gen.dim, "Point dimension")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  gen_cmd->add_option("--inliers", gen.inliers, "Planted inlier correspondences")
      ->capture_default_str();
  gen_cmd->add_option("--outliers", gen.outliers, "Random outlier correspondences")
      ->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "Inlier noise standard deviation (m)")
      ->capture_default_str();
  gen_cmd->add_option("--extent", gen.extent, "Sampling box half-width (m)")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Verify a correspondence set; exit 0 accepted, 3 rejected");
  verify_cmd->add_option("--corr", verify.corr, "Correspondence JSON-lines file")
      ->required();
  verify_cmd->add_option("--method", verify.method, "clique or ransac")
      ->check(CLI::IsMember({"clique", "ransac"}))
      ->capture_default_str();
  verify_cmd->add_option("--dim", verify.dim, "Dimension assumed for an empty file")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  verify_cmd->add_option("--epsilon", verify.epsilon, "Pairwise consistency tolerance (m)")
      ->capture_default_str();
  verify_cmd->add_option("--min-inliers", verify.min_inliers,
                         "Acceptance threshold [default: 5 in 3D, 10 in 2D]");
  auto* budget_opt = verify_cmd->add_option("--budget", verify.budget,
                                            "Clique search node budget [default: unlimited]");
  auto* iter_opt = verify_cmd->add_option("--iterations", verify.iterations,
                                          "RANSAC iterations")
                       ->capture_default_str();
  budget_opt->excludes(iter_opt);
  verify_cmd->add_option("--inlier-tol", verify.inlier_tol,
                         "RANSAC inlier tolerance (m) [default: epsilon]");
  verify_cmd->add_option("--seed", verify.seed, "RANSAC seed")->capture_default_str();
  verify_cmd->add_option("--threads", verify.threads, "Graph construction threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_flag("--no-timing", verify.no_timing, "Report elapsed_ms as 0");
  verify_cmd->add_option("--graph-dump", verify.graph_dump,
                         "Write the compatibility graph adjacency to this file");

  MatchArgs match;
  auto* match_cmd =
      app.add_subcommand("match", "Match descriptors into correspondences (JSON lines)");
  match_cmd->add_option("--query-desc", match.query_desc, "Query descriptor file")->required();
  match_cmd->add_option("--ref-desc", match.ref_desc, "Reference descriptor file")->required();
  match_cmd->add_option("--query-pts", match.query_pts, "Query keypoint file")->required();
  match_cmd->add_option("--ref-pts", match.ref_pts, "Reference keypoint file")->required();
  match_cmd->add_option("--tau", match.tau, "Hamming distance threshold (bits)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  match_cmd->add_flag("--mutual", match.mutual, "Keep mutual best matches only");
  auto* exhaustive_flag =
      match_cmd->add_flag("--exhaustive", match.exhaustive, "Linear scan instead of the tree");
  auto* leaf_opt = match_cmd->add_option("--leaf-capacity", match.leaf_capacity,
                                         "Tree leaf capacity")
                       ->check(CLI::PositiveNumber)
                       ->capture_default_str();
  exhaustive_flag->excludes(leaf_opt);
  match_cmd->add_option("--out", match.out, "Output file, '-' for stdout")
      ->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the clique-vs-RANSAC sweep");
  bench_cmd->add_option("--ratios", bench.ratios, "Outlier ratios")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--sigmas", bench.sigmas, "Inlier noise levels (m)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods,
                        "clique, ransac (10000 iterations), ransac:N, ransac:auto")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell")->capture_default_str();
  bench_cmd->add_option("--correspondences", bench.correspondences,
                        "Correspondences per scene")
      ->capture_default_str();
  bench_cmd->add_option("--dim", bench.dim, "Point dimension")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.epsilon, "Consistency tolerance (m)")
      ->capture_default_str();
  bench_cmd->add_option("--extent", bench.extent, "Scene half-width (m)")
      ->capture_default_str();
  bench_cmd->add_option("--inlier-tol", bench.inlier_tol,
                        "RANSAC inlier tolerance (m) [default: epsilon]");
  bench_cmd->add_option("--min-inliers", bench.min_inliers,
                        "Acceptance threshold [default: 5 in 3D, 10 in 2D]");
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV report path")->capture_default_str();
  bench_cmd->add_option("--json", bench.json, "Also write a JSON report here");
  bench_cmd->add_flag("--verbose", bench.verbose, "Per-trial detail in the JSON report");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Report times as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParams;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*verify_cmd) return cmd_verify(verify);
    if (*match_cmd) return cmd_match(match);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitParams;
}

}  // namespace cliqueloop::cli
