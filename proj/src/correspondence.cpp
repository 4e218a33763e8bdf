#include "cliqueloop/correspondence.hpp"

#include <string>

#include "cliqueloop/error.hpp"

namespace cliqueloop {

CorrespondenceSet::CorrespondenceSet(int dim, std::vector<Correspondence> items)
    : dim_(dim) {
  items_.reserve(items.size());
  for (const auto& c : items) push_back(c);
}

void CorrespondenceSet::push_back(const Correspondence& c) {
  if (c.m.dim() != dim_ || c.q.dim() != dim_) {
    throw Error(ErrorCode::DimMismatch,
                "correspondence dimension differs from set dimension " +
                    std::to_string(dim_));
  }
  items_.push_back(c);
}

CorrespondenceSet CorrespondenceSet::select(
    const std::vector<std::size_t>& indices) const {
  CorrespondenceSet out(dim_);
  out.items_.reserve(indices.size());
  for (std::size_t i : indices) out.items_.push_back(items_.at(i));
  return out;
}

NPointSet CorrespondenceSet::reference_points() const {
  NPointSet out(dim_);
  for (const auto& c : items_) out.push_back(c.m);
  return out;
}

NPointSet CorrespondenceSet::query_points() const {
  NPointSet out(dim_);
  for (const auto& c : items_) out.push_back(c.q);
  return out;
}

}  // namespace cliqueloop
