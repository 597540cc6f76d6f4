#pragma once

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "maxflow.hpp"

namespace vsp {

/// Maximum number of internally vertex-disjoint i-j paths (i, j non-adjacent).
inline int alpha_pair(const Graph& g, Vertex i, Vertex j) {
  auto net = build_split_network(g, i, j);
  return max_flow(net).value;
}

/// Minimum i-j vertex separator together with its size.
inline MaxFlowResult min_vertex_cut(const Graph& g, Vertex i, Vertex j) {
  auto net = build_split_network(g, i, j);
  return max_flow(net);
}

/// alpha_ij for every unordered non-adjacent pair, plus their minimum.
class AlphaTable {
 public:
  AlphaTable() = default;
  explicit AlphaTable(int n) : n_(n), values_(static_cast<std::size_t>(n) * n, -1) {}

  int n() const { return n_; }

  std::optional<int> get(Vertex i, Vertex j) const {
    const int v = values_[index(i, j)];
    if (v < 0) return std::nullopt;
    return v;
  }

  /// alpha_ij; throws for pairs that are not stored (adjacent or i == j).
  int at(Vertex i, Vertex j) const {
    const auto v = get(i, j);
    if (!v) throw InvalidArgument("alpha is defined only for non-adjacent pairs");
    return *v;
  }

  void set(Vertex i, Vertex j, int value) {
    values_[index(i, j)] = value;
    values_[index(j, i)] = value;
  }

  /// Stored pairs (i < j) in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> pairs() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j = i + 1; j < n_; ++j)
        if (values_[index(i, j)] >= 0) out.emplace_back(i, j);
    return out;
  }

  int alpha_min() const { return alpha_min_; }
  std::pair<Vertex, Vertex> argmin() const { return argmin_; }

  void finalize() {
    alpha_min_ = std::numeric_limits<int>::max();
    for (auto [i, j] : pairs()) {
      const int v = values_[index(i, j)];
      if (v < alpha_min_) {
        alpha_min_ = v;
        argmin_ = {i, j};
      }
    }
  }

 private:
  std::size_t index(Vertex i, Vertex j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<int> values_;
  int alpha_min_ = 0;
  std::pair<Vertex, Vertex> argmin_{-1, -1};
};

namespace detail {

inline std::vector<std::pair<Vertex, Vertex>> non_adjacent_pairs(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex i = 0; i < g.n(); ++i)
    for (Vertex j = i + 1; j < g.n(); ++j)
      if (!g.adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

inline void require_alpha_domain(const Graph& g) {
  if (!g.connected()) throw DisconnectedGraph("alpha values need a connected graph");
  if (g.complete()) throw InvalidArgument("complete graph has no non-adjacent pair");
}

}  // namespace detail

/// All alpha_ij, computed pair by pair. Pairs are split across `threads`
/// workers, each with its own network; the result does not depend on the split.
inline AlphaTable alpha_table(const Graph& g, int threads = 1) {
  detail::require_alpha_domain(g);
  const auto pairs = detail::non_adjacent_pairs(g);
  AlphaTable table(g.n());
  std::vector<int> values(pairs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < pairs.size(); k = next++) values[k] = alpha_pair(g, pairs[k].first, pairs[k].second);
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(pairs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) table.set(pairs[k].first, pairs[k].second, values[k]);
  table.finalize();
  return table;
}

/// min alpha_ij over non-adjacent pairs; stops at the first pair with value 1.
inline int alpha_min(const Graph& g) {
  detail::require_alpha_domain(g);
  int best = std::numeric_limits<int>::max();
  for (auto [i, j] : detail::non_adjacent_pairs(g)) {
    best = std::min(best, alpha_pair(g, i, j));
    if (best == 1) break;
  }
  return best;
}

/// alpha_0 of the subgraph induced by `vs`: the minimum, over non-adjacent
/// pairs inside `vs`, of the disjoint path count measured inside that subgraph.
inline int alpha_subgraph(const Graph& g, std::span<const Vertex> vs) {
  const Graph sub = g.induced(vs);
  if (!sub.connected()) throw DisconnectedGraph("induced subgraph is not connected");
  if (sub.complete()) throw InvalidArgument("vertex set induces a clique");
  return alpha_min(sub);
}

}  // namespace vsp
