#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cliqueloop/correspondence.hpp"
#include "cliqueloop/hamming_tree.hpp"
#include "cliqueloop/synth.hpp"
#include "cliqueloop/verification.hpp"

// Text formats:
//   points       one "x,y" or "x,y,z" per line
//   descriptors  one lowercase hex string per line, optionally "id,map_id,hex"
//   correspondences  JSON lines {"m_idx","q_idx","m","q","desc_dist"}
// Blank lines and lines starting with '#' are skipped on input. Parse
// failures throw ParseError with the offending line number; unreadable or
// unwritable files throw IoError.

namespace cliqueloop::io {

/// `dim_hint` is used for empty input; otherwise the first point decides.
NPointSet read_points(std::istream& in, int dim_hint = 3);
NPointSet read_points(const std::filesystem::path& path, int dim_hint = 3);
void write_points(std::ostream& out, const NPointSet& points);

/// Entries without an id column get their 0-based line ordinal (among data
/// lines) as keypoint id and map id 0. All descriptors must share a length.
std::vector<DescriptorEntry> read_descriptors(std::istream& in);
std::vector<DescriptorEntry> read_descriptors(const std::filesystem::path& path);
void write_descriptors(std::ostream& out, const std::vector<DescriptorEntry>& entries);

CorrespondenceSet read_correspondences(std::istream& in, int dim_hint = 3);
CorrespondenceSet read_correspondences(const std::filesystem::path& path, int dim_hint = 3);
void write_correspondences(std::ostream& out, const CorrespondenceSet& corr);

/// Compact single-line JSON: method, accepted, inlier_count, rmse,
/// elapsed_ms, transform (row-major rotation + translation), inliers as
/// [m_idx, q_idx] pairs, plus dim and diagnostic.
std::string result_to_json(const VerificationResult& result);

/// Planted transform and labels of a generated scene.
std::string truth_to_json(const Scene& scene);

/// Writes M.csv, Q.csv, corr.jsonl and truth.json into `dir` (created if
/// missing).
void write_scene(const std::filesystem::path& dir, const Scene& scene);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cliqueloop::io
