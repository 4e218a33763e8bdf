#include "cliqueloop/hamming_tree.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "cliqueloop/error.hpp"

namespace cliqueloop {

namespace {

void require_tau(int tau) {
  if (tau < 0) {
    throw Error(ErrorCode::InvalidParams, "tau must be non-negative");
  }
}

void sort_matches(std::vector<DescriptorMatch>& matches) {
  std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) {
    return a.distance != b.distance ? a.distance < b.distance
                                    : a.sequence < b.sequence;
  });
}

}  // namespace

std::vector<DescriptorMatch> linear_scan(const std::vector<DescriptorEntry>& entries,
                                         const BinaryDescriptor& query, int tau) {
  require_tau(tau);
  std::vector<DescriptorMatch> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int d = hamming(entries[i].descriptor, query);
    if (d <= tau) out.push_back({&entries[i], d, i});
  }
  sort_matches(out);
  return out;
}

HammingTree::HammingTree(std::size_t descriptor_bits, std::size_t leaf_capacity)
    : bits_(descriptor_bits), leaf_capacity_(std::max<std::size_t>(1, leaf_capacity)) {
  if (bits_ == 0 || bits_ % 8 != 0) {
    throw Error(ErrorCode::LengthMismatch,
                "descriptor length must be a positive multiple of 8");
  }
  nodes_.emplace_back();
}

void HammingTree::insert(DescriptorEntry entry) {
  if (entry.descriptor.size() != bits_) {
    throw Error(ErrorCode::LengthMismatch,
                "tree holds " + std::to_string(bits_) + "-bit descriptors, got " +
                    std::to_string(entry.descriptor.size()));
  }
  std::vector<bool> used(bits_, false);
  std::size_t node = 0;
  while (!nodes_[node].leaf()) {
    const auto bit = static_cast<std::size_t>(nodes_[node].split_bit);
    used[bit] = true;
    node = nodes_[node].child[entry.descriptor.test(bit) ? 1 : 0];
  }
  nodes_[node].residents.push_back(entries_.size());
  entries_.push_back(std::move(entry));
  if (nodes_[node].residents.size() > leaf_capacity_) {
    try_split(node, used);
  }
}

void HammingTree::try_split(std::size_t leaf, const std::vector<bool>& used_bits) {
  const auto& residents = nodes_[leaf].residents;
  const std::size_t n = residents.size();

  std::vector<std::size_t> set_count(bits_, 0);
  for (std::size_t idx : residents) {
    const auto& d = entries_[idx].descriptor;
    for (std::size_t b = 0; b < bits_; ++b) set_count[b] += d.test(b);
  }

  int best_bit = -1;
  std::size_t best_gap = std::numeric_limits<std::size_t>::max();
  for (std::size_t b = 0; b < bits_; ++b) {
    if (used_bits[b] || set_count[b] == 0 || set_count[b] == n) continue;
    const std::size_t twice = 2 * set_count[b];
    const std::size_t gap = twice > n ? twice - n : n - twice;
    if (gap < best_gap) {
      best_gap = gap;
      best_bit = static_cast<int>(b);
    }
  }
  if (best_bit < 0) return;

  Node zero;
  Node one;
  for (std::size_t idx : residents) {
    (entries_[idx].descriptor.test(static_cast<std::size_t>(best_bit)) ? one : zero)
        .residents.push_back(idx);
  }
  const std::size_t zero_index = nodes_.size();
  nodes_.push_back(std::move(zero));
  nodes_.push_back(std::move(one));

  Node& parent = nodes_[leaf];
  parent.split_bit = best_bit;
  parent.child[0] = zero_index;
  parent.child[1] = zero_index + 1;
  parent.residents.clear();
  parent.residents.shrink_to_fit();
}

std::vector<DescriptorMatch> HammingTree::query(const BinaryDescriptor& query, int tau,
                                                bool exhaustive) const {
  if (query.size() != bits_) {
    throw Error(ErrorCode::LengthMismatch,
                "tree holds " + std::to_string(bits_) + "-bit descriptors, got " +
                    std::to_string(query.size()));
  }
  if (exhaustive) return linear_scan(entries_, query, tau);
  require_tau(tau);

  std::size_t node = 0;
  while (!nodes_[node].leaf()) {
    const auto bit = static_cast<std::size_t>(nodes_[node].split_bit);
    node = nodes_[node].child[query.test(bit) ? 1 : 0];
  }
  std::vector<DescriptorMatch> out;
  for (std::size_t idx : nodes_[node].residents) {
    const int d = hamming(entries_[idx].descriptor, query);
    if (d <= tau) out.push_back({&entries_[idx], d, idx});
  }
  sort_matches(out);
  return out;
}

std::size_t HammingTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf(); }));
}

std::size_t HammingTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [node, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[node].leaf()) {
      stack.emplace_back(nodes_[node].child[0], d + 1);
      stack.emplace_back(nodes_[node].child[1], d + 1);
    }
  }
  return deepest;
}

}  // namespace cliqueloop
