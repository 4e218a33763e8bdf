#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cliqueloop/correspondence.hpp"

namespace cliqueloop {

inline constexpr double kDefaultEpsilon = 1.0;
inline constexpr std::size_t kMaxGraphVertices = 65535;

/// Pairwise rigidity check: | ||m_a - m_b|| - ||q_a - q_b|| | < epsilon.
/// Throws DimMismatch or NonPositiveEpsilon.
bool consistent(const Correspondence& a, const Correspondence& b, double epsilon);

/// Undirected loop-free graph with one fixed-width bitset row per vertex.
class BitGraph {
 public:
  BitGraph() = default;
  explicit BitGraph(std::size_t vertices);

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool adjacent(std::size_t i, std::size_t j) const {
    return (rows_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  /// Sets both (i, j) and (j, i). Self-loops are ignored.
  void add_edge(std::size_t i, std::size_t j);

  std::span<const std::uint64_t> row(std::size_t i) const {
    return {rows_.data() + i * words_, words_};
  }
  std::span<std::uint64_t> mutable_row(std::size_t i) {
    return {rows_.data() + i * words_, words_};
  }

  std::size_t degree(std::size_t i) const;
  std::size_t edge_count() const;
  /// Symmetric with an empty diagonal.
  bool well_formed() const;

  friend bool operator==(const BitGraph&, const BitGraph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Correspondence graph: one vertex per correspondence, an edge wherever the
/// pair passes `consistent` under `epsilon`.
struct CompatibilityGraph {
  CorrespondenceSet vertices;
  BitGraph adjacency;
  double epsilon;
};

/// Evaluates all pairs. Row construction is split across `threads` workers;
/// the result is bit-identical for any thread count. Throws
/// NonPositiveEpsilon or GraphTooLarge (more than 65535 correspondences).
CompatibilityGraph build_graph(const CorrespondenceSet& corr, double epsilon,
                               unsigned threads = 1);

/// "vertices: N" header, then one "i: j,k,l" neighbor line per vertex.
void write_graph_dump(std::ostream& out, const BitGraph& g);

}  // namespace cliqueloop
