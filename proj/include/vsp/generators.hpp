#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "graph.hpp"

// Deterministic graph families used by tests, benchmarks and the `generate`
// subcommand.

namespace vsp::gen {

inline Graph path(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Graph cycle(int n) {
  if (n < 3) throw InvalidArgument("cycle needs at least 3 vertices");
  Graph g = path(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

/// K_{p,q}: vertices 0..p-1 on one side, p..p+q-1 on the other.
inline Graph complete_bipartite(int p, int q) {
  Graph g(p + q);
  for (int u = 0; u < p; ++u)
    for (int v = 0; v < q; ++v) g.add_edge(u, p + v);
  return g;
}

inline Graph star(int leaves) { return complete_bipartite(1, leaves); }

/// Mycielskian: vertices v_0..v_{n-1}, then u_0..u_{n-1}, then w.
inline Graph mycielskian(const Graph& g) {
  const int n = g.n();
  Graph out(2 * n + 1);
  for (auto [x, y] : g.edges()) {
    out.add_edge(x, y);
    out.add_edge(n + x, y);
    out.add_edge(x, n + y);
  }
  for (int x = 0; x < n; ++x) out.add_edge(n + x, 2 * n);
  return out;
}

/// The DIMACS `myciel<k>` graph: k-1 Mycielski steps from K2 (myciel3 has 11 vertices).
inline Graph myciel(int k) {
  if (k < 2) throw InvalidArgument("myciel order must be at least 2");
  Graph g = complete(2);
  for (int step = 1; step < k; ++step) g = mycielskian(g);
  return g;
}

/// The DIMACS `queen<r>_<c>` graph: squares of an r x c board in row-major
/// order, adjacent when a queen moves between them.
inline Graph queen(int rows, int cols) {
  Graph g(rows * cols);
  for (int a = 0; a < rows * cols; ++a)
    for (int b = a + 1; b < rows * cols; ++b) {
      const int ra = a / cols, ca = a % cols, rb = b / cols, cb = b % cols;
      if (ra == rb || ca == cb || ra - ca == rb - cb || ra + ca == rb + cb) g.add_edge(a, b);
    }
  return g;
}

/// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int index_draw(std::mt19937_64& rng, int bound) {
  return static_cast<int>(unit_draw(rng) * bound);
}

/// Connected random graph: a random spanning tree, then every other pair is
/// added with the probability that brings the expected density to `density`.
inline Graph random_connected(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Graph g(n);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(order[k], order[index_draw(rng, k + 1)]);
  for (int k = 1; k < n; ++k) g.add_edge(order[k], order[index_draw(rng, k)]);
  const double pairs = n * (n - 1) / 2.0;
  const double remaining = pairs - (n - 1);
  const double p = remaining > 0 ? std::clamp((density * pairs - (n - 1)) / remaining, 0.0, 1.0) : 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!g.adjacent(u, v) && unit_draw(rng) < p) g.add_edge(u, v);
  return g;
}

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[index_draw(rng, k + 1)]);
  return perm;
}

namespace detail {

// Upper-triangle adjacency bit for pair (u, v), u < v, on at most 8 vertices.
inline int pair_bit(int u, int v) {
  if (u > v) std::swap(u, v);
  return v * (v - 1) / 2 + u;
}

inline std::uint32_t encode(int n, const std::vector<std::uint8_t>& nbr, const std::vector<int>& label) {
  std::uint32_t code = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (nbr[u] >> v & 1) code |= 1u << pair_bit(label[u], label[v]);
  return code;
}

// Minimum code over labelings that order vertices by degree; two graphs are
// isomorphic iff their canonical codes agree.
inline std::uint32_t canonical_code(int n, const std::vector<std::uint8_t>& nbr) {
  std::vector<int> by_degree(static_cast<std::size_t>(n));
  std::iota(by_degree.begin(), by_degree.end(), 0);
  auto deg = [&](int v) { return __builtin_popcount(nbr[v]); };
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](int x, int y) { return deg(x) < deg(y); });
  // classes of equal degree are permuted independently
  std::vector<std::pair<int, int>> classes;
  for (int s = 0; s < n;) {
    int e = s;
    while (e < n && deg(by_degree[e]) == deg(by_degree[s])) ++e;
    classes.emplace_back(s, e);
    s = e;
  }
  std::uint32_t best = ~0u;
  std::vector<int> slot = by_degree, label(static_cast<std::size_t>(n));
  auto recurse = [&](auto&& self, std::size_t cls) -> void {
    if (cls == classes.size()) {
      for (int k = 0; k < n; ++k) label[slot[k]] = k;
      best = std::min(best, encode(n, nbr, label));
      return;
    }
    auto [s, e] = classes[cls];
    std::sort(slot.begin() + s, slot.begin() + e);
    do {
      self(self, cls + 1);
    } while (std::next_permutation(slot.begin() + s, slot.begin() + e));
  };
  recurse(recurse, 0);
  return best;
}

inline Graph decode(int n, std::uint32_t code) {
  Graph g(n);
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u)
      if (code >> pair_bit(u, v) & 1) g.add_edge(u, v);
  return g;
}

}  // namespace detail

/// Every graph on n vertices up to isomorphism (n <= 7), as canonical codes.
inline std::vector<std::uint32_t> all_graph_codes(int n) {
  if (n < 1 || n > 7) throw GuardExceeded("exhaustive graph generation supports 1 <= n <= 7");
  std::set<std::uint32_t> level{0};
  for (int k = 2; k <= n; ++k) {
    std::set<std::uint32_t> next;
    for (std::uint32_t code : level) {
      std::vector<std::uint8_t> nbr(static_cast<std::size_t>(k), 0);
      for (int v = 1; v < k - 1; ++v)
        for (int u = 0; u < v; ++u)
          if (code >> detail::pair_bit(u, v) & 1) {
            nbr[u] |= static_cast<std::uint8_t>(1u << v);
            nbr[v] |= static_cast<std::uint8_t>(1u << u);
          }
      for (unsigned subset = 0; subset < (1u << (k - 1)); ++subset) {
        auto ext = nbr;
        ext[k - 1] = static_cast<std::uint8_t>(subset);
        for (int u = 0; u < k - 1; ++u)
          if (subset >> u & 1) ext[u] |= static_cast<std::uint8_t>(1u << (k - 1));
        next.insert(detail::canonical_code(k, ext));
      }
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

/// Every connected graph on n vertices up to isomorphism (n <= 7).
inline std::vector<Graph> all_connected_graphs(int n) {
  std::vector<Graph> out;
  for (std::uint32_t code : all_graph_codes(n)) {
    Graph g = detail::decode(n, code);
    if (g.connected()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace vsp::gen
