#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cliqueloop/geometry.hpp"

namespace cliqueloop {

/// Tentative match between a reference-map point `m` and a query-map point `q`.
struct Correspondence {
  NPoint m;
  NPoint q;
  std::uint32_t m_idx = 0;
  std::uint32_t q_idx = 0;
  int descriptor_distance = 0;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

class CorrespondenceSet {
 public:
  explicit CorrespondenceSet(int dim) : dim_(dim) {}
  CorrespondenceSet(int dim, std::vector<Correspondence> items);

  int dim() const { return dim_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  const Correspondence& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Correspondence>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// Throws DimMismatch if `c` does not share the set's dimension.
  void push_back(const Correspondence& c);

  /// Subset in the order of `indices`.
  CorrespondenceSet select(const std::vector<std::size_t>& indices) const;

  NPointSet reference_points() const;
  NPointSet query_points() const;

  friend bool operator==(const CorrespondenceSet&, const CorrespondenceSet&) = default;

 private:
  int dim_;
  std::vector<Correspondence> items_;
};

}  // namespace cliqueloop
