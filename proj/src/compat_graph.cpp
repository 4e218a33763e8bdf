#include "cliqueloop/compat_graph.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include "cliqueloop/error.hpp"
#include "cliqueloop/parallel.hpp"

namespace cliqueloop {

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::NonPositiveEpsilon,
                "epsilon must be positive and finite, got " + std::to_string(epsilon));
  }
}

bool consistent_unchecked(const Correspondence& a, const Correspondence& b,
                          double epsilon) {
  return std::abs(distance(a.m, b.m) - distance(a.q, b.q)) < epsilon;
}

}  // namespace

bool consistent(const Correspondence& a, const Correspondence& b, double epsilon) {
  require_epsilon(epsilon);
  if (a.m.dim() != b.m.dim() || a.q.dim() != b.q.dim() || a.m.dim() != a.q.dim()) {
    throw Error(ErrorCode::DimMismatch, "correspondence dimensions differ");
  }
  return consistent_unchecked(a, b, epsilon);
}

BitGraph::BitGraph(std::size_t vertices)
    : n_(vertices), words_((vertices + 63) / 64), rows_(n_ * words_, 0) {}

void BitGraph::add_edge(std::size_t i, std::size_t j) {
  if (i == j) return;
  rows_[i * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
  rows_[j * words_ + (i >> 6)] |= std::uint64_t{1} << (i & 63);
}

std::size_t BitGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (auto w : row(i)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::size_t BitGraph::edge_count() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n_; ++i) total += degree(i);
  return total / 2;
}

bool BitGraph::well_formed() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (adjacent(i, i)) return false;
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (adjacent(i, j) != adjacent(j, i)) return false;
    }
  }
  return true;
}

CompatibilityGraph build_graph(const CorrespondenceSet& corr, double epsilon,
                               unsigned threads) {
  require_epsilon(epsilon);
  if (corr.size() > kMaxGraphVertices) {
    throw Error(ErrorCode::GraphTooLarge,
                std::to_string(corr.size()) + " correspondences exceed the " +
                    std::to_string(kMaxGraphVertices) + "-vertex limit");
  }
  const std::size_t n = corr.size();
  BitGraph g(n);
  // Each worker fills whole rows, evaluating both (i, j) and (j, i). The
  // predicate is exactly symmetric, so the rows agree bit for bit.
  parallel_for(n, threads, [&](std::size_t i) {
    auto row = g.mutable_row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && consistent_unchecked(corr[i], corr[j], epsilon)) {
        row[j >> 6] |= std::uint64_t{1} << (j & 63);
      }
    }
  });
  return {corr, std::move(g), epsilon};
}

void write_graph_dump(std::ostream& out, const BitGraph& g) {
  out << "vertices: " << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << i << ':';
    bool first = true;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!g.adjacent(i, j)) continue;
      out << (first ? " " : ",") << j;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace cliqueloop
