#include "cliqueloop/clique.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

#include "cliqueloop/error.hpp"

namespace cliqueloop {

namespace {

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

void clear_bit(Bits& b, std::size_t i) { b[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

// Branch-and-bound over one graph. Bitset rows are intersected for candidate
// sets; each node colors its candidates greedily and expands them from the
// highest color down, pruning once |current| + color cannot reach the goal.
class Search {
 public:
  Search(const BitGraph& g, std::optional<std::uint64_t> budget)
      : g_(g), words_(g.words_per_row()), budget_(budget) {}

  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }
  const std::vector<std::size_t>& best() const { return best_; }

  Bits all() const {
    Bits b(words_, 0);
    for (std::size_t i = 0; i < g_.size(); ++i) b[i >> 6] |= std::uint64_t{1} << (i & 63);
    return b;
  }

  Bits neighbors_and(const Bits& p, std::size_t v) const {
    Bits out(words_);
    const auto row = g_.row(v);
    for (std::size_t w = 0; w < words_; ++w) out[w] = p[w] & row[w];
    return out;
  }

  void seed(std::vector<std::size_t> clique) { best_ = std::move(clique); }

  void maximize(Bits p) {
    current_.clear();
    expand(std::move(p));
  }

  /// Whether `p` contains a clique of `need` vertices (need >= 1).
  bool contains_clique(Bits p, std::size_t need) {
    current_.clear();
    return find(std::move(p), need);
  }

 private:
  bool tick() {
    ++nodes_;
    if (budget_ && nodes_ > *budget_) aborted_ = true;
    return !aborted_;
  }

  void color(const Bits& p, std::vector<std::size_t>& order,
             std::vector<std::size_t>& colors) const {
    order.clear();
    colors.clear();
    Bits uncolored = p;
    Bits q(words_);
    std::size_t k = 0;
    while (any(uncolored)) {
      ++k;
      q = uncolored;
      for (std::size_t w = 0; w < words_; ++w) {
        while (q[w] != 0) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(q[w]));
          clear_bit(uncolored, v);
          clear_bit(q, v);
          const auto row = g_.row(v);
          for (std::size_t x = w; x < words_; ++x) q[x] &= ~row[x];
          order.push_back(v);
          colors.push_back(k);
        }
      }
    }
  }

  void expand(Bits p) {
    if (!tick()) return;
    std::vector<std::size_t> order;
    std::vector<std::size_t> colors;
    color(p, order, colors);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (aborted_ || current_.size() + colors[i] <= best_.size()) return;
      const std::size_t v = order[i];
      current_.push_back(v);
      Bits next = neighbors_and(p, v);
      if (!any(next)) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(std::move(next));
      }
      current_.pop_back();
      clear_bit(p, v);
    }
  }

  bool find(Bits p, std::size_t need) {
    if (!tick()) return false;
    if (count(p) < need) return false;
    std::vector<std::size_t> order;
    std::vector<std::size_t> colors;
    color(p, order, colors);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (aborted_ || colors[i] < need) return false;
      if (need == 1) return true;
      const std::size_t v = order[i];
      if (find(neighbors_and(p, v), need - 1)) return true;
      clear_bit(p, v);
    }
    return false;
  }

  const BitGraph& g_;
  std::size_t words_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

// Copy of `g` with vertex order[k] renamed to k.
BitGraph permuted(const BitGraph& g, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> rank(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  BitGraph out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (g.adjacent(i, j)) out.add_edge(rank[i], rank[j]);
    }
  }
  return out;
}

// Greedy clique along `order`, used as the first incumbent.
std::vector<std::size_t> greedy_clique(const BitGraph& g) {
  std::vector<std::size_t> clique;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (std::all_of(clique.begin(), clique.end(),
                    [&](std::size_t u) { return g.adjacent(u, v); })) {
      clique.push_back(v);
    }
  }
  return clique;
}

}  // namespace

CliqueResult max_clique(const BitGraph& g, const CliqueOptions& options) {
  CliqueResult result;
  const std::size_t n = g.size();
  if (n == 0) return result;

  // Phase 1: clique number. Vertices renamed so that bit order is degree
  // descending, ties by ascending index.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = g.degree(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  const BitGraph ordered = permuted(g, order);

  Search phase1(ordered, options.node_budget);
  phase1.seed(greedy_clique(ordered));
  phase1.maximize(phase1.all());
  result.nodes_explored = phase1.nodes();

  std::vector<std::size_t> incumbent;
  for (std::size_t v : phase1.best()) incumbent.push_back(order[v]);
  std::sort(incumbent.begin(), incumbent.end());
  if (phase1.aborted()) {
    result.vertices = std::move(incumbent);
    result.optimal = false;
    return result;
  }

  // Phase 2: lexicographically smallest clique of that size, one vertex at a
  // time in the original numbering. Each step takes the lowest candidate that
  // still extends to a full-size clique among higher-numbered vertices.
  const std::size_t omega = incumbent.size();
  std::optional<std::uint64_t> remaining;
  if (options.node_budget) remaining = *options.node_budget - phase1.nodes();
  Search phase2(g, remaining);

  std::vector<std::size_t> chosen;
  Bits candidates = phase2.all();
  for (std::size_t need = omega; need > 0; --need) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n && pick == n; ++v) {
      if (!((candidates[v >> 6] >> (v & 63)) & 1u)) continue;
      Bits rest = phase2.neighbors_and(candidates, v);
      for (std::size_t u = 0; u <= v; ++u) clear_bit(rest, u);
      if (need == 1 || phase2.contains_clique(std::move(rest), need - 1)) pick = v;
      if (phase2.aborted()) break;
    }
    if (phase2.aborted() || pick == n) break;
    chosen.push_back(pick);
    candidates = phase2.neighbors_and(candidates, pick);
    for (std::size_t u = 0; u <= pick; ++u) clear_bit(candidates, u);
  }
  result.nodes_explored += phase2.nodes();

  if (chosen.size() == omega) {
    result.vertices = std::move(chosen);
  } else {
    result.vertices = std::move(incumbent);
    result.optimal = false;
  }
  return result;
}

CliqueResult brute_force_max_clique(const BitGraph& g) {
  const std::size_t n = g.size();
  if (n > kBruteForceLimit) {
    throw Error(ErrorCode::GraphTooLarge,
                std::to_string(n) + " vertices exceed the brute-force limit of " +
                    std::to_string(kBruteForceLimit));
  }
  std::vector<std::uint32_t> closed(n);
  for (std::size_t i = 0; i < n; ++i) {
    closed[i] = std::uint32_t{1} << i;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.adjacent(i, j)) closed[i] |= std::uint32_t{1} << j;
    }
  }

  std::uint32_t best = 0;
  int best_size = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    const auto mask = static_cast<std::uint32_t>(s);
    const int size = std::popcount(mask);
    if (size < best_size) continue;
    bool clique = true;
    for (std::uint32_t rest = mask; rest != 0 && clique; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      clique = (mask & ~closed[static_cast<std::size_t>(v)]) == 0;
    }
    if (!clique) continue;
    // Equal sizes: the lowest differing vertex decides the lexicographic order.
    const bool smaller = size == best_size && (mask & (mask ^ best) & -(mask ^ best)) != 0;
    if (size > best_size || smaller) {
      best = mask;
      best_size = size;
    }
  }

  CliqueResult result;
  result.nodes_explored = subsets;
  for (std::size_t v = 0; v < n; ++v) {
    if ((best >> v) & 1u) result.vertices.push_back(v);
  }
  return result;
}

bool is_clique(const BitGraph& g, const std::vector<std::size_t>& vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (!g.adjacent(vertices[a], vertices[b])) return false;
    }
  }
  return true;
}

bool is_maximal_clique(const BitGraph& g, const std::vector<std::size_t>& vertices) {
  if (!is_clique(g, vertices)) return false;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (std::find(vertices.begin(), vertices.end(), v) != vertices.end()) continue;
    if (std::all_of(vertices.begin(), vertices.end(),
                    [&](std::size_t u) { return g.adjacent(u, v); })) {
      return false;
    }
  }
  return true;
}

}  // namespace cliqueloop
