#include "cliqueloop/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "cliqueloop/clique.hpp"
#include "cliqueloop/compat_graph.hpp"
#include "cliqueloop/error.hpp"
#include "cliqueloop/rng.hpp"

namespace cliqueloop {

namespace {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

// Fits on the selected correspondences, filling transform/rmse or the
// diagnostic when the fit is ill-posed.
void fit_inliers(VerificationResult& result) {
  try {
    result.transform = solve_rigid(result.inliers.reference_points(),
                                   result.inliers.query_points());
    result.rmse = residual_rmse(*result.transform, result.inliers);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Degenerate) {
      result.diagnostic = "degenerate";
    } else if (e.code() == ErrorCode::Underdetermined) {
      result.diagnostic = "underdetermined";
    } else {
      throw;
    }
  }
}

}  // namespace

std::string_view to_string(Method m) {
  return m == Method::Clique ? "clique" : "ransac";
}

VerificationResult verify_clique(const CorrespondenceSet& corr,
                                 const VerificationParams& params) {
  Stopwatch clock;
  VerificationResult result;
  result.method = Method::Clique;
  result.inliers = CorrespondenceSet(corr.dim());

  const CompatibilityGraph graph = build_graph(corr, params.epsilon, params.threads);
  if (corr.empty()) {
    result.diagnostic = "empty_input";
    return result;
  }

  CliqueOptions options;
  options.node_budget = params.clique_budget;
  const CliqueResult clique = max_clique(graph, options);
  result.nodes_explored = clique.nodes_explored;
  result.inlier_indices = clique.vertices;
  result.inliers = corr.select(clique.vertices);
  result.inlier_count = clique.size();
  if (!clique.optimal) result.diagnostic = "budget_exhausted";

  fit_inliers(result);
  result.accepted = result.transform.has_value() &&
                    result.inlier_count >= params.min_inliers_for(corr.dim());
  if (params.record_timing) result.elapsed_ms = clock.elapsed_ms();
  return result;
}

VerificationResult verify_ransac(const CorrespondenceSet& corr, const RansacParams& rparams,
                                 const VerificationParams& params) {
  Stopwatch clock;
  const std::size_t sample_size =
      rparams.sample_size.value_or(static_cast<std::size_t>(corr.dim()));
  if (rparams.iterations < 1) {
    throw Error(ErrorCode::InvalidParams, "RANSAC needs at least one iteration");
  }
  if (!(rparams.inlier_tol > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "RANSAC inlier tolerance must be positive");
  }
  if (sample_size < 1 || corr.size() < sample_size) {
    throw Error(ErrorCode::TooFewCorrespondences,
                std::to_string(corr.size()) + " correspondences for a sample of " +
                    std::to_string(sample_size));
  }

  const std::size_t n = corr.size();
  std::vector<Eigen::Vector3d> src(n);
  std::vector<Eigen::Vector3d> dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = corr[i].m.embedded();
    dst[i] = corr[i].q.embedded();
  }
  const double tol_sq = rparams.inlier_tol * rparams.inlier_tol;
  auto consensus_of = [&](const RigidTransform& t, std::vector<std::size_t>& out) {
    out.clear();
    const Eigen::Matrix3d& r = t.embedded_rotation();
    const Eigen::Vector3d& tr = t.embedded_translation();
    for (std::size_t i = 0; i < n; ++i) {
      if ((dst[i] - r * src[i] - tr).squaredNorm() < tol_sq) out.push_back(i);
    }
  };

  Rng rng(rparams.seed);
  std::vector<std::size_t> sample;
  std::vector<std::size_t> consensus;
  std::vector<std::size_t> best;
  std::optional<RigidTransform> best_model;
  for (int it = 0; it < rparams.iterations; ++it) {
    sample.clear();
    while (sample.size() < sample_size) {
      const auto k = static_cast<std::size_t>(uniform_index(rng, n));
      if (std::find(sample.begin(), sample.end(), k) == sample.end()) sample.push_back(k);
    }
    const CorrespondenceSet picked = corr.select(sample);
    std::optional<RigidTransform> model;
    try {
      model = solve_rigid(picked.reference_points(), picked.query_points());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Degenerate && e.code() != ErrorCode::Underdetermined) throw;
      continue;
    }
    consensus_of(*model, consensus);
    if (consensus.size() > best.size()) {
      best.swap(consensus);
      best_model = model;
    }
  }

  VerificationResult result;
  result.method = Method::Ransac;
  result.inliers = CorrespondenceSet(corr.dim());
  if (!best_model) {
    result.diagnostic = "no_valid_sample";
    if (params.record_timing) result.elapsed_ms = clock.elapsed_ms();
    return result;
  }

  result.inlier_indices = best;
  result.inliers = corr.select(best);
  result.inlier_count = best.size();
  fit_inliers(result);
  if (!result.transform) {
    // Refit failed; fall back to the hypothesis that produced the consensus.
    result.transform = best_model;
    result.rmse = residual_rmse(*best_model, result.inliers);
  }
  result.accepted = result.inlier_count >= params.min_inliers_for(corr.dim());
  if (params.record_timing) result.elapsed_ms = clock.elapsed_ms();
  return result;
}

int ransac_iterations(double inlier_ratio, double success_prob, int sample_size) {
  if (!(inlier_ratio > 0.0 && inlier_ratio < 1.0) ||
      !(success_prob > 0.0 && success_prob < 1.0) || sample_size < 1) {
    throw Error(ErrorCode::DomainError,
                "need 0 < w < 1, 0 < p < 1 and s >= 1");
  }
  const double all_inlier = std::pow(inlier_ratio, sample_size);
  const double k = std::log1p(-success_prob) / std::log1p(-all_inlier);
  return std::max(1, static_cast<int>(std::ceil(k)));
}

}  // namespace cliqueloop
