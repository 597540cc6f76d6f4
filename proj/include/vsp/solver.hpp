#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "connectivity.hpp"
#include "graph.hpp"
#include "lp.hpp"
#include "model.hpp"

namespace vsp {

enum class SolveStatus { Optimal, TimeLimit, Infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

enum class Strategy { Fictitious, Pairs };

struct CutFamilies {
  bool alpha_pair = true;
  bool chain = true;
  bool subgraph = true;

  static CutFamilies none() { return {false, false, false}; }
  bool any() const { return alpha_pair || chain || subgraph; }
};

struct SolverConfig {
  double time_limit = 1800.0;  // seconds
  CutFamilies cuts;
  int max_rounds = 10;
  int max_cuts_per_round = 50;
  std::string branching = "most-fractional";
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::Fictitious;
  int alpha_threads = 1;
  // Cut rows above this multiple of the column count trigger a purge of slack cuts.
  int purge_factor = 4;
};

struct AuditLog {
  long checks = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
  bool clean() const { return failures.empty(); }
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  VertexPartition partition;
  double objective = 0.0;
  double bound = 0.0;
  long nodes = 0;
  std::map<CutOrigin, long> cuts;
  double wall_seconds = 0.0;
  int beta = 0;
  int alpha_min = 0;
  double root_bound = 0.0;
  long lp_iterations = 0;
  AuditLog audit;

  std::size_t separator_size() const { return partition.C.size(); }
  long cut_count(CutOrigin o) const {
    auto it = cuts.find(o);
    return it == cuts.end() ? 0 : it->second;
  }
};

inline constexpr double kIntegralityTol = 1e-6;

inline bool is_integral(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v - std::round(v)) <= kIntegralityTol; });
}

/// Partition encoded by an integral model point; throws if `x` is fractional
/// or does not describe a feasible partition.
inline VertexPartition decode(const VspModel& m, const Graph& g, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.cols()) throw InvalidArgument("point has the wrong number of columns");
  if (!is_integral(x)) throw InvalidArgument("point is not integral");
  for (Vertex v = 0; v < m.n; ++v)
    if (m.value(x, v, Side::A) > 0.5 && m.value(x, v, Side::B) > 0.5) throw InvalidArgument("vertex assigned to both sides");
  auto p = decode_point(m, x);
  const auto verdict = validate_partition(g, p, m.beta);
  if (!verdict.feasible()) throw InvalidArgument("point does not describe a feasible partition");
  return p;
}

/// Column whose value is closest to 0.5; ties go to the lowest column, which
/// puts A-side columns before B-side ones.
inline int branch_column(std::span<const double> x) {
  int best = -1;
  double best_dist = 2.0;
  for (int col = 0; col < static_cast<int>(x.size()); ++col) {
    const double frac = x[col] - std::floor(x[col]);
    if (frac <= kIntegralityTol || frac >= 1.0 - kIntegralityTol) continue;
    const double dist = std::abs(frac - 0.5);
    if (dist < best_dist - 1e-12) {
      best_dist = dist;
      best = col;
    }
  }
  if (best < 0) throw InvalidArgument("branching requires a fractional point");
  return best;
}

/// Greedy rounding: vertices in decreasing order of max(x_A, x_B) join their
/// larger side when that keeps A and B non-adjacent and within beta, else C.
inline std::optional<VertexPartition> primal_heuristic(const VspModel& m, const Graph& g, std::span<const double> x, int beta) {
  const int n = g.n();
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto score = [&](Vertex v) { return std::max(m.value(x, v, Side::A), m.value(x, v, Side::B)); };
  std::stable_sort(order.begin(), order.end(), [&](Vertex l, Vertex r) { return score(l) > score(r); });
  std::vector<Side> side(static_cast<std::size_t>(n), Side::C);
  int size_a = 0, size_b = 0;
  for (Vertex v : order) {
    if (score(v) <= kIntegralityTol) break;
    const Side want = m.value(x, v, Side::A) >= m.value(x, v, Side::B) ? Side::A : Side::B;
    const Side other = want == Side::A ? Side::B : Side::A;
    int& size = want == Side::A ? size_a : size_b;
    if (size >= beta) continue;
    const auto& nb = g.neighbors(v);
    if (std::any_of(nb.begin(), nb.end(), [&](Vertex u) { return side[u] == other; })) continue;
    side[v] = want;
    ++size;
  }
  auto p = VertexPartition::from_sides(side);
  if (p.A.size() > p.B.size()) std::swap(p.A, p.B);
  if (p.A.empty() || p.B.empty()) return std::nullopt;
  return p;
}

/// Moves separator vertices into A or B while that stays feasible.
inline VertexPartition improve_partition(const Graph& g, VertexPartition p, int beta) {
  auto side = p.sides(g.n());
  int size_a = static_cast<int>(p.A.size()), size_b = static_cast<int>(p.B.size());
  std::vector<Vertex> order = p.C;
  std::stable_sort(order.begin(), order.end(), [&](Vertex l, Vertex r) { return g.cost(l) > g.cost(r); });
  for (Vertex v : order) {
    const auto& nb = g.neighbors(v);
    auto touches = [&](Side s) { return std::any_of(nb.begin(), nb.end(), [&](Vertex u) { return side[u] == s; }); };
    if (size_a < beta && !touches(Side::B)) {
      side[v] = Side::A;
      ++size_a;
    } else if (size_b < beta && !touches(Side::A)) {
      side[v] = Side::B;
      ++size_b;
    }
  }
  auto out = VertexPartition::from_sides(side);
  if (out.A.size() > out.B.size()) std::swap(out.A, out.B);
  return out;
}

/// Exhaustive oracle, independent of the LP machinery. Unit costs enumerate C
/// by increasing size and stop at the first success; weighted costs scan all
/// subsets.
inline SolveResult brute_force(const Graph& g, int beta) {
  const int n = g.n();
  if (n > 22) throw GuardExceeded("brute force is limited to 22 vertices");
  if (beta < 1) throw InvalidArgument("beta must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;

  // Splits the components of G - C into A and B; returns the A mask or 0.
  auto split = [&](std::uint32_t c_mask) -> std::uint32_t {
    std::vector<std::uint32_t> comps;
    std::uint32_t rest = full & ~c_mask;
    while (rest) {
      std::uint32_t comp = rest & (~rest + 1u), frontier = comp;
      while (frontier) {
        const int v = std::countr_zero(frontier);
        frontier &= frontier - 1u;
        const std::uint32_t fresh = adj[v] & rest & ~comp;
        comp |= fresh;
        frontier |= fresh;
      }
      comps.push_back(comp);
      rest &= ~comp;
    }
    if (comps.size() < 2) return 0;
    const int total = std::popcount(full & ~c_mask);
    // reach[s] = mask of a component subset with s vertices
    std::vector<std::uint32_t> reach(static_cast<std::size_t>(total) + 1, 0);
    std::vector<char> ok(static_cast<std::size_t>(total) + 1, 0);
    ok[0] = 1;
    for (std::uint32_t comp : comps) {
      const int sz = std::popcount(comp);
      for (int s = total; s >= sz; --s)
        if (!ok[s] && ok[s - sz]) {
          ok[s] = 1;
          reach[s] = reach[s - sz] | comp;
        }
    }
    for (int s = 1; s < total; ++s)
      if (ok[s] && s <= beta && total - s <= beta) return reach[s];
    return 0;
  };

  SolveResult r;
  r.beta = beta;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> best;  // (C mask, A mask)
  double best_kept = -1.0;
  auto kept_of = [&](std::uint32_t c_mask) {
    double s = 0.0;
    for (int v = 0; v < n; ++v)
      if (!(c_mask >> v & 1u)) s += g.cost(v);
    return s;
  };
  if (g.unit_costs()) {
    for (int k = 0; k <= n && !best; ++k) {
      if (k == 0) {
        if (auto a = split(0)) best = std::pair{0u, a};
        continue;
      }
      // subsets of size k in increasing numeric order (Gosper's hack)
      std::uint64_t c = (1ull << k) - 1ull;
      while (c < (1ull << n)) {
        if (auto a = split(static_cast<std::uint32_t>(c))) {
          best = std::pair{static_cast<std::uint32_t>(c), a};
          break;
        }
        const std::uint64_t lo = c & (~c + 1ull), hi = c + lo;
        c = (((hi ^ c) >> 2) / lo) | hi;
      }
    }
    if (best) best_kept = kept_of(best->first);
  } else {
    for (std::uint64_t c = 0; c <= full; ++c) {
      const double kept = kept_of(static_cast<std::uint32_t>(c));
      if (kept <= best_kept) continue;
      if (auto a = split(static_cast<std::uint32_t>(c))) {
        best = std::pair{static_cast<std::uint32_t>(c), a};
        best_kept = kept;
      }
    }
  }
  if (best) {
    std::vector<Side> side(static_cast<std::size_t>(n), Side::B);
    for (int v = 0; v < n; ++v) {
      if (best->first >> v & 1u) side[v] = Side::C;
      if (best->second >> v & 1u) side[v] = Side::A;
    }
    r.partition = VertexPartition::from_sides(side);
    if (r.partition.A.size() > r.partition.B.size()) std::swap(r.partition.A, r.partition.B);
    r.status = SolveStatus::Optimal;
    r.objective = r.bound = best_kept;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace detail {

struct Incumbent {
  std::optional<VertexPartition> partition;
  double value = -std::numeric_limits<double>::infinity();
};

class BranchAndCut {
 public:
  using Clock = std::chrono::steady_clock;

  BranchAndCut(const Graph& g, VspModel& m, const AlphaTable& table, const SolverConfig& cfg, Clock::time_point deadline,
               Incumbent& inc, SolveResult& stats, double offset)
      : g_(g), m_(m), table_(table), cfg_(cfg), deadline_(deadline), inc_(inc), stats_(stats), offset_(offset),
        engine_(m.relaxation()), integral_(g.integral_costs()) {
    if (cfg.cuts.subgraph) subgraph_rows_ = subgraph_family(m, g, m.mode == ModelMode::Fictitious ? &table : nullptr);
  }

  /// Runs to completion or the deadline; returns the best bound of the
  /// unexplored part of the tree (or -inf when everything was closed).
  double run(bool& timed_out) {
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{std::numeric_limits<double>::infinity(), seq_++, {}, nullptr});
    timed_out = false;
    while (!open.empty()) {
      if (Clock::now() >= deadline_) {
        timed_out = true;
        return open.top().bound;
      }
      Node node = open.top();
      open.pop();
      if (!improves(node.bound)) continue;
      process(node, open);
    }
    return -std::numeric_limits<double>::infinity();
  }

  double root_bound() const { return root_bound_; }

 private:
  struct Node {
    double bound;
    long seq;
    std::vector<std::pair<int, int>> fixings;
    std::shared_ptr<const lp::Basis> basis;
  };
  struct NodeOrder {
    bool operator()(const Node& l, const Node& r) const {
      if (l.bound != r.bound) return l.bound < r.bound;
      return l.seq > r.seq;
    }
  };

  bool improves(double bound) const {
    if (!inc_.partition) return true;
    if (integral_) return std::floor(bound + 1e-6) > inc_.value + 1e-9;
    return bound > inc_.value + 1e-9;
  }

  void offer(const VertexPartition& p) {
    const auto verdict = validate_partition(g_, p, m_.beta);
    stats_.audit.check(verdict.feasible(), "incumbent candidate is not a feasible partition");
    if (!verdict.feasible()) return;
    const double value = kept_cost(g_, p);
    if (value > inc_.value + 1e-9) {
      inc_.value = value;
      inc_.partition = p;
    }
  }

  // LP value at a node must dominate any incumbent the node still contains.
  void audit_node(double bound, const std::vector<std::pair<int, int>>& fixings) {
    if (!inc_.partition) return;
    auto point = encode(m_, *inc_.partition);
    if (!point) return;
    for (auto [col, val] : fixings)
      if ((*point)[col] != val) return;
    stats_.audit.check(bound >= inc_.value - 1e-6, "node LP bound below a contained incumbent");
  }

  lp::LpSolution solve_lp(const lp::Basis* warm) {
    auto sol = engine_.solve(warm);
    if (sol.status == lp::LpStatus::NumericalFailure) sol = engine_.solve(nullptr);
    stats_.lp_iterations += sol.iterations;
    if (sol.status == lp::LpStatus::NumericalFailure) throw InternalError("LP engine failed: " + sol.diagnostic);
    return sol;
  }

  std::vector<ScoredCut> separate(std::span<const double> x) {
    std::vector<ScoredCut> all;
    const int k = cfg_.max_cuts_per_round;
    auto take = [&](std::vector<ScoredCut> found) {
      for (auto& c : found)
        if (!active_.count(c.cut.signature())) all.push_back(std::move(c));
    };
    if (cfg_.cuts.alpha_pair) take(separate_alpha_pairs(m_, table_, x, k));
    if (cfg_.cuts.chain) take(separate_chain(m_, g_, x, k));
    if (cfg_.cuts.subgraph) take(separate_subgraph(subgraph_rows_, x, k));
    std::stable_sort(all.begin(), all.end(), [](const ScoredCut& l, const ScoredCut& r) { return l.violation > r.violation; });
    if (static_cast<int>(all.size()) > k) all.resize(static_cast<std::size_t>(k));
    return all;
  }

  void activate(const LinearConstraint& c) {
    const auto sig = c.signature();
    if (active_.count(sig)) return;
    active_[sig] = engine_.add_row(c.to_row());
    if (pool_.add(c)) ++stats_.cuts[c.origin];
  }

  void purge(std::span<const double> x) {
    if (static_cast<int>(active_.size()) <= cfg_.purge_factor * std::max(1, m_.cols())) return;
    std::vector<std::uint64_t> drop;
    for (const auto& c : pool_.cuts()) {
      auto it = active_.find(c.signature());
      if (it == active_.end()) continue;
      if (c.violation(x) < -1e-3) {
        drop.push_back(it->second);
        active_.erase(it);
      }
    }
    engine_.remove_rows(drop);
  }

  void apply_bounds(const std::vector<std::pair<int, int>>& fixings) {
    for (int col = 0; col < m_.cols(); ++col) engine_.set_bounds(col, m_.lower[col], m_.upper[col]);
    for (auto [col, val] : fixings) engine_.set_bounds(col, val, val);
  }

  template <class Queue>
  void process(const Node& node, Queue& open) {
    ++stats_.nodes;
    apply_bounds(node.fixings);
    auto sol = solve_lp(node.basis.get());
    if (sol.status == lp::LpStatus::Infeasible) return;
    const bool root = node.seq == 0;
    for (int round = 0;; ++round) {
      const double bound = sol.value + offset_;
      audit_node(bound, node.fixings);
      if (root && round == 0) {
        root_bound_ = bound;
        if (m_.mode == ModelMode::Fictitious && g_.unit_costs())
          stats_.audit.check(bound <= g_.n() - m_.alpha_min + 1e-6, "root bound exceeds n - alpha_min");
      }
      if (!improves(bound)) return;
      if (is_integral(sol.x) || round >= cfg_.max_rounds || !cfg_.cuts.any()) break;
      auto cuts = separate(sol.x);
      if (cuts.empty()) break;
      for (const auto& c : cuts) activate(c.cut);
      sol = solve_lp(&sol.basis);
      if (sol.status == lp::LpStatus::Infeasible) return;
    }
    if (root) root_bound_ = std::min(root_bound_, sol.value + offset_);
    const double bound = sol.value + offset_;

    if (is_integral(sol.x)) {
      auto p = decode_point(m_, sol.x);
      offer(p);
      return;
    }
    if (auto h = primal_heuristic(m_, g_, sol.x, m_.beta)) {
      offer(improve_partition(g_, *h, m_.beta));
    }
    if (!improves(bound)) return;
    purge(sol.x);
    const int col = branch_column(sol.x);
    auto basis = std::make_shared<const lp::Basis>(sol.basis);
    for (int val : {1, 0}) {
      Node child{bound, seq_++, node.fixings, basis};
      child.fixings.emplace_back(col, val);
      open.push(std::move(child));
    }
  }

  const Graph& g_;
  VspModel& m_;
  const AlphaTable& table_;
  const SolverConfig& cfg_;
  Clock::time_point deadline_;
  Incumbent& inc_;
  SolveResult& stats_;
  double offset_;
  lp::Simplex engine_;
  bool integral_;
  std::vector<LinearConstraint> subgraph_rows_;
  CutPool pool_;
  std::unordered_map<std::string, std::uint64_t> active_;
  long seq_ = 0;
  double root_bound_ = std::numeric_limits<double>::infinity();
};

// Kept cost never exceeds the total minus the alpha_min cheapest vertices.
inline double trivial_bound(const Graph& g, int alpha_min) {
  std::vector<double> c(g.costs().begin(), g.costs().end());
  std::sort(c.begin(), c.end());
  double s = g.total_cost();
  for (int k = 0; k < alpha_min && k < static_cast<int>(c.size()); ++k) s -= c[k];
  return s;
}

}  // namespace detail

/// Exact branch-and-cut for the vertex separator problem.
inline SolveResult solve(const Graph& g, int beta, const SolverConfig& cfg = {}) {
  if (cfg.time_limit <= 0) throw InvalidArgument("time limit must be positive");
  if (beta < 1) throw InvalidArgument("beta must be at least 1");
  if (g.n() < 2) throw InvalidArgument("graph needs at least two vertices");
  if (!g.connected()) throw DisconnectedGraph("graph is not connected");
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(cfg.time_limit));
  SolveResult r;
  r.beta = beta;
  auto finish = [&]() -> SolveResult {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  if (g.complete()) {
    r.status = SolveStatus::Infeasible;
    return finish();
  }
  const AlphaTable table = alpha_table(g, cfg.alpha_threads);
  r.alpha_min = table.alpha_min();

  detail::Incumbent inc;
  double open_bound = -std::numeric_limits<double>::infinity();
  bool timed_out = false;
  if (cfg.strategy == Strategy::Fictitious) {
    VspModel m = build_full_model(g, beta, table.alpha_min());
    detail::BranchAndCut bc(g, m, table, cfg, deadline, inc, r, 0.0);
    open_bound = bc.run(timed_out);
    r.root_bound = bc.root_bound();
  } else {
    const auto pairs = table.pairs();
    r.root_bound = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [a, b] = pairs[k];
      VspModel m = build_ab_model(g, a, b, beta);
      detail::BranchAndCut bc(g, m, table, cfg, deadline, inc, r, g.cost(a) + g.cost(b));
      bool out_of_time = false;
      const double left = bc.run(out_of_time);
      r.root_bound = std::max(r.root_bound, bc.root_bound());
      if (out_of_time) {
        timed_out = true;
        open_bound = k + 1 < pairs.size() ? std::max(left, detail::trivial_bound(g, r.alpha_min)) : left;
        break;
      }
    }
  }

  if (inc.partition) {
    r.partition = *inc.partition;
    r.objective = inc.value;
  }
  if (timed_out) {
    r.status = SolveStatus::TimeLimit;
    r.bound = std::max(inc.partition ? inc.value : 0.0, std::min(open_bound, detail::trivial_bound(g, r.alpha_min)));
  } else if (inc.partition) {
    r.status = SolveStatus::Optimal;
    r.bound = r.objective;
  } else {
    r.status = SolveStatus::Infeasible;
  }
  r.audit.check(r.bound >= r.objective - 1e-6, "final bound below objective");
  return finish();
}

}  // namespace vsp
