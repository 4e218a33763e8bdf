#pragma once

#include <vector>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/descriptor.hpp"
#include "cliqueloop/hamming_tree.hpp"

namespace cliqueloop {

inline constexpr int kDefaultHammingThreshold = 50;

struct MatchOptions {
  int tau = kDefaultHammingThreshold;
  /// Keep only pairs that are also the reference descriptor's best query.
  bool mutual = false;
  /// Linear scan instead of single-path tree descent.
  bool exhaustive = false;
};

/// Keypoints of one map with one descriptor per keypoint (same order).
struct MapFeatures {
  NPointSet keypoints;
  std::vector<BinaryDescriptor> descriptors;
};

/// Builds the tentative correspondence set between a query map and a
/// reference map indexed by `reference_tree`, whose entry keypoint ids index
/// `reference_keypoints`.
///
/// Each query keypoint contributes at most one correspondence: its closest
/// reference descriptor within `tau` (ties by lowest reference keypoint id).
/// Empty inputs give an empty set. Throws LengthMismatch, DimMismatch, or
/// InvalidParams for negative tau / out-of-range keypoint ids.
CorrespondenceSet match_maps(const MapFeatures& query,
                             const HammingTree& reference_tree,
                             const NPointSet& reference_keypoints,
                             const MatchOptions& options = {});

}  // namespace cliqueloop
