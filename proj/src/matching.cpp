#include "cliqueloop/matching.hpp"

#include <limits>
#include <string>
#include <unordered_map>

#include "cliqueloop/error.hpp"

namespace cliqueloop {

namespace {

// Best query index for one reference keypoint over all of its descriptors:
// minimum distance, ties to the lowest query index.
std::size_t best_query_for(std::uint32_t keypoint_id, const HammingTree& tree,
                           const std::vector<BinaryDescriptor>& query) {
  std::size_t best = 0;
  int best_distance = std::numeric_limits<int>::max();
  for (const auto& entry : tree.entries()) {
    if (entry.keypoint_id != keypoint_id) continue;
    for (std::size_t i = 0; i < query.size(); ++i) {
      const int d = hamming(entry.descriptor, query[i]);
      if (d < best_distance || (d == best_distance && i < best)) {
        best_distance = d;
        best = i;
      }
    }
  }
  return best;
}

}  // namespace

CorrespondenceSet match_maps(const MapFeatures& query,
                             const HammingTree& reference_tree,
                             const NPointSet& reference_keypoints,
                             const MatchOptions& options) {
  if (options.tau < 0) {
    throw Error(ErrorCode::InvalidParams, "tau must be non-negative");
  }
  if (query.descriptors.size() != query.keypoints.size()) {
    throw Error(ErrorCode::SizeMismatch,
                std::to_string(query.descriptors.size()) + " query descriptors for " +
                    std::to_string(query.keypoints.size()) + " keypoints");
  }
  CorrespondenceSet out(reference_keypoints.dim());
  if (query.keypoints.empty() || reference_tree.size() == 0) return out;

  if (query.keypoints.dim() != reference_keypoints.dim()) {
    throw Error(ErrorCode::DimMismatch, "query and reference keypoint dimensions differ");
  }
  for (const auto& entry : reference_tree.entries()) {
    if (entry.keypoint_id >= reference_keypoints.size()) {
      throw Error(ErrorCode::InvalidParams,
                  "reference keypoint id " + std::to_string(entry.keypoint_id) +
                      " out of range");
    }
  }

  std::unordered_map<std::uint32_t, std::size_t> reference_best_query;
  for (std::size_t qi = 0; qi < query.descriptors.size(); ++qi) {
    const auto matches =
        reference_tree.query(query.descriptors[qi], options.tau, options.exhaustive);
    if (matches.empty()) continue;

    // Matches are sorted by distance; pick the lowest keypoint id among the
    // closest ones.
    const DescriptorMatch* best = &matches.front();
    for (const auto& m : matches) {
      if (m.distance != best->distance) break;
      if (m.entry->keypoint_id < best->entry->keypoint_id) best = &m;
    }

    if (options.mutual) {
      const std::uint32_t kp = best->entry->keypoint_id;
      auto it = reference_best_query.find(kp);
      if (it == reference_best_query.end()) {
        it = reference_best_query
                 .emplace(kp, best_query_for(kp, reference_tree, query.descriptors))
                 .first;
      }
      if (it->second != qi) continue;
    }

    Correspondence c;
    c.m = reference_keypoints[best->entry->keypoint_id];
    c.q = query.keypoints[qi];
    c.m_idx = best->entry->keypoint_id;
    c.q_idx = static_cast<std::uint32_t>(qi);
    c.descriptor_distance = best->distance;
    out.push_back(c);
  }
  return out;
}

}  // namespace cliqueloop
