#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cliqueloop/descriptor.hpp"

namespace cliqueloop {

struct DescriptorEntry {
  BinaryDescriptor descriptor;
  std::uint32_t keypoint_id = 0;
  std::uint32_t map_id = 0;
};

struct DescriptorMatch {
  const DescriptorEntry* entry = nullptr;
  int distance = 0;
  /// Position of the entry in insertion order; secondary sort key.
  std::size_t sequence = 0;
};

/// Exhaustive threshold search: every entry with hamming <= tau, sorted by
/// (distance, position in `entries`).
std::vector<DescriptorMatch> linear_scan(const std::vector<DescriptorEntry>& entries,
                                         const BinaryDescriptor& query, int tau);

/// Binary search tree over descriptor bits for fast approximate threshold
/// queries in Hamming space.
///
/// Internal nodes split on one bit index; leaves hold up to `leaf_capacity`
/// entries. A leaf that overflows splits on the bit not yet used on its path
/// whose set-count among residents is closest to half (lowest index on ties).
/// If no such bit separates the residents the leaf keeps growing.
///
/// Queries descend the single branch selected by the query's bits and verify
/// every candidate, so results are sound but may miss matches stored in
/// other leaves. Not synchronized: concurrent queries are fine, insertions
/// need exclusive access.
class HammingTree {
 public:
  static constexpr std::size_t kDefaultLeafCapacity = 100;

  explicit HammingTree(std::size_t descriptor_bits,
                       std::size_t leaf_capacity = kDefaultLeafCapacity);

  /// Throws LengthMismatch.
  void insert(DescriptorEntry entry);

  /// Entries within `tau` bits of `query`, sorted ascending by distance, ties
  /// by insertion order. `exhaustive` scans every entry instead of one leaf.
  std::vector<DescriptorMatch> query(const BinaryDescriptor& query, int tau,
                                     bool exhaustive = false) const;

  std::size_t descriptor_bits() const { return bits_; }
  std::size_t leaf_capacity() const { return leaf_capacity_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<DescriptorEntry>& entries() const { return entries_; }

  // Structure inspection, mostly for tests.
  struct Node {
    int split_bit = -1;  // -1 for leaves
    std::size_t child[2] = {0, 0};
    std::vector<std::size_t> residents;  // indices into entries(), leaves only
    bool leaf() const { return split_bit < 0; }
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  std::size_t depth() const;

 private:
  void try_split(std::size_t leaf, const std::vector<bool>& used_bits);

  std::size_t bits_;
  std::size_t leaf_capacity_;
  std::vector<DescriptorEntry> entries_;
  std::vector<Node> nodes_;
};

}  // namespace cliqueloop
