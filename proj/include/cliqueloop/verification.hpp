#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/geometry.hpp"
#include "cliqueloop/matching.hpp"

namespace cliqueloop {

/// Minimum inlier counts for accepting a loop closure.
inline constexpr std::size_t kMinInliers3d = 5;
inline constexpr std::size_t kMinInliers2d = 10;

inline std::size_t default_min_inliers(int dim) {
  return dim == 2 ? kMinInliers2d : kMinInliers3d;
}

struct VerificationParams {
  int tau_hamming = kDefaultHammingThreshold;
  double epsilon = 1.0;
  /// Defaults to 5 in 3D and 10 in 2D when unset.
  std::optional<std::size_t> min_inliers;
  std::optional<std::uint64_t> clique_budget;
  /// Worker threads for graph construction; results do not depend on it.
  unsigned threads = 1;
  /// When false, elapsed_ms is reported as 0 so output is reproducible.
  bool record_timing = true;

  std::size_t min_inliers_for(int dim) const {
    return min_inliers.value_or(default_min_inliers(dim));
  }
};

inline constexpr int kDefaultRansacIterations = 10000;

struct RansacParams {
  int iterations = kDefaultRansacIterations;
  double inlier_tol = 1.0;
  /// Minimal sample; the point dimension when unset.
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
};

enum class Method { Clique, Ransac };
std::string_view to_string(Method m);

struct VerificationResult {
  Method method = Method::Clique;
  bool accepted = false;
  CorrespondenceSet inliers{3};
  /// Positions of the inliers in the input correspondence set, ascending.
  std::vector<std::size_t> inlier_indices;
  std::optional<RigidTransform> transform;
  std::size_t inlier_count = 0;
  std::optional<double> rmse;
  double elapsed_ms = 0.0;
  /// Empty on a clean run; otherwise "degenerate", "underdetermined",
  /// "budget_exhausted", "no_valid_sample" or "empty_input".
  std::string diagnostic;
  std::uint64_t nodes_explored = 0;
};

/// Builds the compatibility graph, takes its maximum clique as the inlier
/// set, fits the rigid transform on it and accepts iff the clique has at
/// least `min_inliers` members and the fit is well posed. Fully
/// deterministic. Throws NonPositiveEpsilon; empty input is a rejection.
VerificationResult verify_clique(const CorrespondenceSet& corr,
                                 const VerificationParams& params = {});

/// Fixed-iteration RANSAC baseline with a seeded generator. Degenerate
/// samples consume their iteration. The largest consensus set is refit and
/// accepted iff it reaches `min_inliers`. Throws TooFewCorrespondences or
/// InvalidParams.
VerificationResult verify_ransac(const CorrespondenceSet& corr, const RansacParams& rparams,
                                 const VerificationParams& params = {});

/// ceil(log(1 - p) / log(1 - w^s)), at least 1. Throws DomainError.
int ransac_iterations(double inlier_ratio, double success_prob, int sample_size);

}  // namespace cliqueloop
