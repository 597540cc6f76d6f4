#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance text (bad header, ids out of range, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

/// A call whose precondition does not hold (adjacent pair, complete graph, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Enumeration-based routines refuse instances above their size guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// A runtime self-check failed (numerical breakdown or a broken invariant).
class InternalError : public Error {
 public:
  using Error::Error;
};

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on vertices 0..n-1 with nonnegative vertex costs.
///
/// Neighbor lists are kept sorted and an n*n adjacency matrix answers
/// adjacency queries in O(1); the instances handled here have at most a few
/// hundred vertices.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n)), matrix_(static_cast<std::size_t>(n) * n, 0), cost_(static_cast<std::size_t>(n), 1.0) {
    if (n < 0) throw InvalidArgument("negative vertex count");
  }

  Graph(int n, std::span<const Edge> edges) : Graph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  /// Adds {u,v}; a repeated edge is ignored. Self-loops are rejected.
  void add_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
    if (adjacent(u, v)) return;
    matrix_[index(u, v)] = 1;
    matrix_[index(v, u)] = 1;
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    ++m_;
  }

  void remove_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (!adjacent(u, v)) return;
    matrix_[index(u, v)] = 0;
    matrix_[index(v, u)] = 0;
    std::erase(adj_[u], v);
    std::erase(adj_[v], u);
    --m_;
  }

  int n() const { return n_; }
  std::size_t edge_count() const { return m_; }

  bool adjacent(Vertex u, Vertex v) const { return matrix_[index(u, v)] != 0; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }

  /// All edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  double cost(Vertex v) const { return cost_[v]; }
  std::span<const double> costs() const { return cost_; }

  void set_cost(Vertex v, double c) {
    check_vertex(v);
    if (!(c >= 0.0)) throw InvalidArgument("vertex cost must be nonnegative");
    cost_[v] = c;
  }

  bool unit_costs() const {
    return std::all_of(cost_.begin(), cost_.end(), [](double c) { return c == 1.0; });
  }

  /// True when every cost is an integer, so objective values are integral.
  bool integral_costs() const {
    return std::all_of(cost_.begin(), cost_.end(), [](double c) { return c == static_cast<double>(static_cast<long long>(c)); });
  }

  double total_cost() const { return std::accumulate(cost_.begin(), cost_.end(), 0.0); }

  bool complete() const { return n_ >= 1 && m_ == static_cast<std::size_t>(n_) * (n_ - 1) / 2; }

  bool connected() const {
    if (n_ <= 1) return true;
    return component_of(0).size() == static_cast<std::size_t>(n_);
  }

  /// Vertices reachable from `start`, in BFS order.
  std::vector<Vertex> component_of(Vertex start) const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<Vertex> order{start};
    seen[start] = 1;
    for (std::size_t head = 0; head < order.size(); ++head)
      for (Vertex w : adj_[order[head]])
        if (!seen[w]) {
          seen[w] = 1;
          order.push_back(w);
        }
    return order;
  }

  /// Subgraph induced by `vs`; vertex k of the result is vs[k]. Costs carried over.
  Graph induced(std::span<const Vertex> vs) const {
    Graph sub(static_cast<int>(vs.size()));
    std::vector<int> pos(static_cast<std::size_t>(n_), -1);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      check_vertex(vs[k]);
      if (pos[vs[k]] != -1) throw InvalidArgument("duplicate vertex in induced subgraph");
      pos[vs[k]] = static_cast<int>(k);
      sub.cost_[k] = cost_[vs[k]];
    }
    for (std::size_t k = 0; k < vs.size(); ++k)
      for (Vertex w : adj_[vs[k]])
        if (pos[w] > static_cast<int>(k)) sub.add_edge(static_cast<int>(k), pos[w]);
    return sub;
  }

  /// Relabels vertex v as perm[v].
  Graph permuted(std::span<const Vertex> perm) const {
    if (perm.size() != static_cast<std::size_t>(n_)) throw InvalidArgument("permutation size mismatch");
    Graph out(n_);
    for (auto [u, v] : edges()) out.add_edge(perm[u], perm[v]);
    for (Vertex v = 0; v < n_; ++v) out.cost_[perm[v]] = cost_[v];
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.matrix_ == b.matrix_ && a.cost_ == b.cost_;
  }

 private:
  std::size_t index(Vertex u, Vertex v) const { return static_cast<std::size_t>(u) * n_ + v; }

  void check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  }

  static void insert_sorted(std::vector<Vertex>& list, Vertex v) {
    list.insert(std::upper_bound(list.begin(), list.end(), v), v);
  }

  int n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<char> matrix_;
  std::vector<double> cost_;
};

/// Default balance bound: floor(2n/3).
inline int default_beta(int n) { return (2 * n) / 3; }

struct InstanceMeta {
  int n = 0;
  std::size_t e = 0;
  double density = 0.0;
  int beta = 0;
};

inline InstanceMeta meta(const Graph& g) {
  if (g.n() < 2) throw InvalidArgument("instance metadata needs at least two vertices");
  InstanceMeta m;
  m.n = g.n();
  m.e = g.edge_count();
  m.density = 2.0 * static_cast<double>(m.e) / (static_cast<double>(m.n) * (m.n - 1));
  m.beta = default_beta(m.n);
  return m;
}

enum class Side : std::uint8_t { A, B, C };

/// A partition (A, B, C) of the vertex set. Members are kept sorted.
struct VertexPartition {
  std::vector<Vertex> A, B, C;

  /// Builds the partition from a per-vertex side assignment.
  static VertexPartition from_sides(std::span<const Side> sides) {
    VertexPartition p;
    for (std::size_t v = 0; v < sides.size(); ++v) {
      auto& target = sides[v] == Side::A ? p.A : sides[v] == Side::B ? p.B : p.C;
      target.push_back(static_cast<Vertex>(v));
    }
    return p;
  }

  /// Per-vertex sides; throws when the sets do not partition 0..n-1.
  std::vector<Side> sides(int n) const {
    std::vector<int> seen(static_cast<std::size_t>(n), -1);
    auto mark = [&](const std::vector<Vertex>& set, Side s) {
      for (Vertex v : set) {
        if (v < 0 || v >= n) throw InvalidArgument("partition vertex " + std::to_string(v) + " out of range");
        if (seen[v] != -1) throw InvalidArgument("vertex " + std::to_string(v) + " appears twice in partition");
        seen[v] = static_cast<int>(s);
      }
    };
    mark(A, Side::A);
    mark(B, Side::B);
    mark(C, Side::C);
    std::vector<Side> out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (seen[v] == -1) throw InvalidArgument("vertex " + std::to_string(v) + " missing from partition");
      out[v] = static_cast<Side>(seen[v]);
    }
    return out;
  }

  void normalize() {
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    std::sort(C.begin(), C.end());
  }

  friend bool operator==(const VertexPartition&, const VertexPartition&) = default;
};

enum class PartitionViolation { None, EmptyA, EmptyB, CrossEdge, SizeBound };

struct PartitionVerdict {
  PartitionViolation violation = PartitionViolation::None;
  Edge cross_edge{-1, -1};

  bool feasible() const { return violation == PartitionViolation::None; }
};

inline const char* to_string(PartitionViolation v) {
  switch (v) {
    case PartitionViolation::None: return "feasible";
    case PartitionViolation::EmptyA: return "A is empty";
    case PartitionViolation::EmptyB: return "B is empty";
    case PartitionViolation::CrossEdge: return "edge between A and B";
    case PartitionViolation::SizeBound: return "max(|A|,|B|) exceeds beta";
  }
  return "unknown";
}

/// Checks nonemptiness of A and B, absence of A-B edges, and the size bound,
/// in that order; reports the first violated condition.
inline PartitionVerdict validate_partition(const Graph& g, const VertexPartition& p, int beta) {
  const auto sides = p.sides(g.n());
  PartitionVerdict verdict;
  if (p.A.empty()) {
    verdict.violation = PartitionViolation::EmptyA;
    return verdict;
  }
  if (p.B.empty()) {
    verdict.violation = PartitionViolation::EmptyB;
    return verdict;
  }
  for (Vertex u : p.A)
    for (Vertex w : g.neighbors(u))
      if (sides[w] == Side::B) {
        verdict.violation = PartitionViolation::CrossEdge;
        verdict.cross_edge = {u, w};
        return verdict;
      }
  if (static_cast<int>(std::max(p.A.size(), p.B.size())) > beta) verdict.violation = PartitionViolation::SizeBound;
  return verdict;
}

/// Sum of c_i over A and B, the quantity the solvers maximize.
inline double kept_cost(const Graph& g, const VertexPartition& p) {
  double total = 0.0;
  for (Vertex v : p.A) total += g.cost(v);
  for (Vertex v : p.B) total += g.cost(v);
  return total;
}

inline double separator_cost(const Graph& g, const VertexPartition& p) {
  double total = 0.0;
  for (Vertex v : p.C) total += g.cost(v);
  return total;
}

}  // namespace vsp
