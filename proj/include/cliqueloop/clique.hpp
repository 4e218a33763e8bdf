#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cliqueloop/compat_graph.hpp"

namespace cliqueloop {

struct CliqueOptions {
  /// Upper bound on search-tree nodes; unlimited when empty.
  std::optional<std::uint64_t> node_budget;
};

struct CliqueResult {
  std::vector<std::size_t> vertices;  // ascending
  bool optimal = true;                // false iff the budget ran out
  std::uint64_t nodes_explored = 0;

  std::size_t size() const { return vertices.size(); }
};

/// Exact maximum clique by bitset branch-and-bound with a greedy-coloring
/// bound and a degree-descending initial order (ties by index).
///
/// Among several maximum cliques the lexicographically smallest ascending
/// vertex list is returned. An empty graph yields an empty result. When the
/// node budget is exhausted the best clique found so far is returned with
/// `optimal == false`.
CliqueResult max_clique(const BitGraph& g, const CliqueOptions& options = {});

inline CliqueResult max_clique(const CompatibilityGraph& g,
                               const CliqueOptions& options = {}) {
  return max_clique(g.adjacency, options);
}

inline constexpr std::size_t kBruteForceLimit = 25;

/// Reference oracle: enumerates all 2^n vertex subsets. Same tie-breaking as
/// max_clique. Throws GraphTooLarge above 25 vertices.
CliqueResult brute_force_max_clique(const BitGraph& g);

/// True iff every pair in `vertices` is adjacent.
bool is_clique(const BitGraph& g, const std::vector<std::size_t>& vertices);

/// True iff no vertex outside `vertices` is adjacent to all of them.
bool is_maximal_clique(const BitGraph& g, const std::vector<std::size_t>& vertices);

}  // namespace cliqueloop
