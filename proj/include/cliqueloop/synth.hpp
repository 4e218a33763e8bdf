#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/geometry.hpp"
#include "cliqueloop/verification.hpp"

namespace cliqueloop {

struct SceneSpec {
  int dim = 3;
  std::size_t n_inliers = 30;
  std::size_t n_outliers = 70;
  double noise_sigma = 0.05;
  /// Half-width of the sampling box, meters.
  double extent = 50.0;
  /// Planted transform; drawn uniformly at random when unset.
  std::optional<RigidTransform> transform;
  std::uint64_t seed = 0;
};

/// Planted registration instance. Correspondence i pairs M[i] with Q[i].
struct Scene {
  NPointSet reference;  // M
  NPointSet query;      // Q
  CorrespondenceSet correspondences;
  std::vector<bool> is_inlier;
  RigidTransform truth;

  std::vector<std::size_t> inlier_indices() const;
};

/// Inliers: m uniform in the box, q = R m + t + N(0, sigma^2) per axis.
/// Outliers: m and q drawn independently (q = R u + t for a fresh uniform u,
/// so both classes share the same spatial spread). Order is shuffled.
/// Deterministic in the seed. Throws InvalidSpec.
Scene gen_scene(const SceneSpec& spec);

/// Rotation uniformly distributed on SO(dim).
RigidTransform random_rotation(int dim, std::uint64_t seed, double translation_extent = 0.0);

struct TrialOutcome {
  std::string method;
  bool accepted = false;
  std::optional<double> rotation_error;     // radians, accepted trials only
  std::optional<double> translation_error;  // meters, accepted trials only
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t inlier_count = 0;
  double elapsed_ms = 0.0;
};

/// Scores a verification against planted labels. Inliers count as reported
/// only when the loop was accepted; nothing reported gives precision 1.
TrialOutcome evaluate_trial(const VerificationResult& result, const Scene& scene,
                            std::string method_label = {});

struct MethodSpec {
  Method kind = Method::Clique;
  int iterations = kDefaultRansacIterations;  // RANSAC only

  std::string label() const;
  /// "clique", "ransac" (10,000 iterations), "ransac:N", or "ransac:auto"
  /// (iteration count from the probabilistic formula with w = 0.3,
  /// p = 0.999 and the minimal sample of `dim`). Throws InvalidGrid.
  static MethodSpec parse(const std::string& text, int dim);
};

/// clique, RANSAC-10K and RANSAC at the formula-derived iteration count.
std::vector<MethodSpec> default_methods(int dim);

struct SweepConfig {
  std::vector<double> outlier_ratios{0.0, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> sigmas{0.0, 0.05, 0.2};
  std::vector<MethodSpec> methods = default_methods(3);
  std::size_t trials = 100;
  std::size_t correspondences = 100;
  int dim = 3;
  double epsilon = 1.0;
  double extent = 50.0;
  /// RANSAC inlier tolerance; defaults to epsilon.
  std::optional<double> ransac_inlier_tol;
  std::optional<std::size_t> min_inliers;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool record_timing = true;
};

struct CellSummary {
  double outlier_ratio = 0.0;
  double sigma = 0.0;
  std::string method;
  std::size_t trials = 0;
  double accept_rate = 0.0;
  std::optional<double> rot_err_mean;
  std::optional<double> rot_err_median;
  std::optional<double> trans_err_mean;
  std::optional<double> trans_err_median;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double time_ms_mean = 0.0;
  std::vector<TrialOutcome> outcomes;
};

struct SweepReport {
  SweepConfig config;
  std::vector<CellSummary> cells;
};

/// Cells in (ratio, sigma, method) order. Each trial's scene is shared by
/// all methods; seeds derive from (seed, ratio index, sigma index, trial), so
/// results do not depend on `threads`. `progress` receives (cells done,
/// total) from the calling thread. Throws InvalidGrid.
SweepReport run_sweep(const SweepConfig& config,
                      const std::function<void(std::size_t, std::size_t)>& progress = {});

inline constexpr const char* kReportCsvHeader =
    "outlier_ratio,sigma,method,accept_rate,rot_err_mean_rad,trans_err_mean_m,"
    "precision,recall,f1,time_ms_mean";

void write_report_csv(std::ostream& out, const SweepReport& report);
/// Per-trial detail is included when `verbose`.
void write_report_json(std::ostream& out, const SweepReport& report, bool verbose);

}  // namespace cliqueloop
