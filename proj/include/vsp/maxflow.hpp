#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "graph.hpp"

namespace vsp {

/// Directed network in which every vertex other than the two terminals is
/// split into an entry node x' and an exit node x'' joined by a unit arc, so
/// that a maximum s-t flow counts internally vertex-disjoint s-t paths.
///
/// Each undirected edge {u,v} becomes the arcs out(u)->in(v) and out(v)->in(u)
/// with capacity `big`; for the terminals in() and out() are the same node.
/// Every arc is stored next to its zero-capacity residual twin.
struct SplitNetwork {
  struct Arc {
    int to = 0;
    int cap = 0;       // residual capacity
    int original = 0;  // capacity before any flow was pushed
  };

  int source = 0;
  int sink = 0;
  int big = 0;
  Vertex s = -1, t = -1;
  std::vector<Arc> arcs;                 // arc k and arc k^1 are twins
  std::vector<std::vector<int>> out;     // arc ids leaving each node
  std::vector<int> entry, exit;          // per original vertex
  std::vector<int> split_arc;            // arc id of x'->x'', -1 for terminals

  int node_count() const { return static_cast<int>(out.size()); }

  int add_arc(int from, int to, int cap) {
    const int id = static_cast<int>(arcs.size());
    arcs.push_back({to, cap, cap});
    arcs.push_back({from, 0, 0});
    out[from].push_back(id);
    out[to].push_back(id + 1);
    return id;
  }
};

inline SplitNetwork build_split_network(const Graph& g, Vertex s, Vertex t) {
  const int n = g.n();
  if (s < 0 || t < 0 || s >= n || t >= n) throw InvalidArgument("terminal out of range");
  if (s == t) throw InvalidArgument("terminals must differ");
  if (g.adjacent(s, t)) throw InvalidArgument("terminals are adjacent; vertex-disjoint path count undefined");

  SplitNetwork net;
  net.s = s;
  net.t = t;
  net.big = n;
  const int internal = n - 2;
  net.out.resize(static_cast<std::size_t>(2 * internal + 2));
  net.source = 2 * internal;
  net.sink = 2 * internal + 1;
  net.entry.assign(static_cast<std::size_t>(n), -1);
  net.exit.assign(static_cast<std::size_t>(n), -1);
  net.split_arc.assign(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Vertex x = 0; x < n; ++x) {
    if (x == s) {
      net.entry[x] = net.exit[x] = net.source;
    } else if (x == t) {
      net.entry[x] = net.exit[x] = net.sink;
    } else {
      net.entry[x] = next++;
      net.exit[x] = next++;
      net.split_arc[x] = net.add_arc(net.entry[x], net.exit[x], 1);
    }
  }
  for (auto [u, v] : g.edges()) {
    net.add_arc(net.exit[u], net.entry[v], net.big);
    net.add_arc(net.exit[v], net.entry[u], net.big);
  }
  return net;
}

struct MaxFlowResult {
  int value = 0;
  std::vector<Vertex> cut;  // minimum s-t vertex separator, sorted
};

/// Push-relabel maximum flow (FIFO selection, gap relabeling, global
/// relabeling after every `node_count` relabels), run to a complete flow so
/// that the final residual graph yields the source-side minimum cut.
///
/// The returned cut holds the vertices whose split arc leaves the set of
/// nodes reachable from the source in the residual graph.
class PushRelabel {
 public:
  explicit PushRelabel(SplitNetwork& net)
      : net_(net), n_(net.node_count()), height_(static_cast<std::size_t>(n_), 0), excess_(static_cast<std::size_t>(n_), 0),
        current_(static_cast<std::size_t>(n_), 0), count_(static_cast<std::size_t>(2 * n_ + 1), 0) {}

  MaxFlowResult run() {
    const int s = net_.source, t = net_.sink;
    height_[s] = n_;
    for (int id : net_.out[s]) {
      auto& arc = net_.arcs[id];
      if (arc.cap > 0) {
        const int delta = arc.cap;
        arc.cap = 0;
        net_.arcs[id ^ 1].cap += delta;
        excess_[arc.to] += delta;
        excess_[s] -= delta;
      }
    }
    global_relabel();
    for (int v = 0; v < n_; ++v)
      if (v != s && v != t && excess_[v] > 0) active_.push_back(v);
    while (!active_.empty()) {
      const int v = active_.front();
      active_.pop_front();
      discharge(v);
    }

    MaxFlowResult result;
    result.value = excess_[t];
    const auto reach = reachable_from_source();
    for (Vertex x = 0; x < static_cast<int>(net_.split_arc.size()); ++x)
      if (net_.split_arc[x] >= 0 && reach[net_.entry[x]] && !reach[net_.exit[x]]) result.cut.push_back(x);
    return result;
  }

 private:
  void discharge(int v) {
    while (excess_[v] > 0) {
      if (current_[v] == net_.out[v].size()) {
        relabel(v);
        if (height_[v] >= 2 * n_) break;
        continue;
      }
      const int id = net_.out[v][current_[v]];
      auto& arc = net_.arcs[id];
      if (arc.cap > 0 && height_[v] == height_[arc.to] + 1) {
        const int delta = std::min(excess_[v], arc.cap);
        arc.cap -= delta;
        net_.arcs[id ^ 1].cap += delta;
        excess_[v] -= delta;
        const bool was_idle = excess_[arc.to] == 0;
        excess_[arc.to] += delta;
        if (was_idle && arc.to != net_.source && arc.to != net_.sink) active_.push_back(arc.to);
      } else {
        ++current_[v];
      }
    }
  }

  void relabel(int v) {
    const int old = height_[v];
    int lowest = 2 * n_;
    for (int id : net_.out[v]) {
      const auto& arc = net_.arcs[id];
      if (arc.cap > 0) lowest = std::min(lowest, height_[arc.to] + 1);
    }
    --count_[old];
    height_[v] = std::min(lowest, 2 * n_);
    ++count_[height_[v]];
    current_[v] = 0;
    if (old < n_ && count_[old] == 0) gap(old);
    if (++relabels_since_global_ >= n_) global_relabel();
  }

  // No node sits at height `level`: nothing above it (below n) can reach the sink.
  void gap(int level) {
    for (int v = 0; v < n_; ++v) {
      if (v == net_.source) continue;
      if (height_[v] > level && height_[v] < n_) {
        --count_[height_[v]];
        height_[v] = n_ + 1;
        ++count_[height_[v]];
        current_[v] = 0;
      }
    }
  }

  // Exact distances to the sink in the residual graph; nodes that cannot reach
  // the sink get n + distance to the source.
  void global_relabel() {
    relabels_since_global_ = 0;
    std::fill(height_.begin(), height_.end(), 2 * n_);
    backward_bfs(net_.sink, 0);
    height_[net_.source] = n_;
    backward_bfs(net_.source, n_);
    std::fill(count_.begin(), count_.end(), 0);
    for (int v = 0; v < n_; ++v) ++count_[height_[v]];
    std::fill(current_.begin(), current_.end(), 0);
  }

  void backward_bfs(int root, int base) {
    std::vector<int> queue{root};
    height_[root] = base;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int w = queue[head];
      for (int id : net_.out[w]) {
        // arc id goes w->u; its twin u->w is residual when the twin has capacity
        const int u = net_.arcs[id].to;
        if (net_.arcs[id ^ 1].cap > 0 && height_[u] == 2 * n_ && u != net_.source && u != net_.sink) {
          height_[u] = height_[w] + 1;
          queue.push_back(u);
        }
      }
    }
  }

  std::vector<char> reachable_from_source() const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> queue{net_.source};
    seen[net_.source] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (int id : net_.out[queue[head]]) {
        const auto& arc = net_.arcs[id];
        if (arc.cap > 0 && !seen[arc.to]) {
          seen[arc.to] = 1;
          queue.push_back(arc.to);
        }
      }
    return seen;
  }

  SplitNetwork& net_;
  int n_;
  std::vector<int> height_;
  std::vector<int> excess_;
  std::vector<std::size_t> current_;
  std::vector<int> count_;
  std::deque<int> active_;
  int relabels_since_global_ = 0;
};

/// Maximum s-t flow on `net` (its residual capacities are consumed).
inline MaxFlowResult max_flow(SplitNetwork& net) { return PushRelabel(net).run(); }

}  // namespace vsp
