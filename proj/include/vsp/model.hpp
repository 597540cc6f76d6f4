#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "connectivity.hpp"
#include "graph.hpp"
#include "lp.hpp"

namespace vsp {

using Rational = boost::rational<long long>;

inline constexpr double kViolationTol = 1e-6;

enum class ModelMode : std::uint8_t { AbFixed, Fictitious };
enum class CutOrigin : std::uint8_t { Base, Chain, AlphaPair, Subgraph, Bound };

inline const char* to_string(CutOrigin o) {
  switch (o) {
    case CutOrigin::Base: return "base";
    case CutOrigin::Chain: return "chain";
    case CutOrigin::AlphaPair: return "alpha_pair";
    case CutOrigin::Subgraph: return "subgraph";
    case CutOrigin::Bound: return "bound";
  }
  return "unknown";
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

struct LinearConstraint {
  std::map<int, Rational> terms;  // column -> coefficient, never zero
  lp::Sense sense = lp::Sense::LessEqual;
  Rational rhs{0};
  CutOrigin origin = CutOrigin::Base;

  double activity(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& [col, c] : terms) s += to_double(c) * x[col];
    return s;
  }

  /// Amount by which `x` violates the constraint (<= 0 when satisfied).
  double violation(std::span<const double> x) const {
    const double act = activity(x);
    const double r = to_double(rhs);
    switch (sense) {
      case lp::Sense::LessEqual: return act - r;
      case lp::Sense::GreaterEqual: return r - act;
      case lp::Sense::Equal: return std::abs(act - r);
    }
    return 0.0;
  }

  bool satisfied_by(std::span<const int> point) const {
    Rational act{0};
    for (const auto& [col, c] : terms) act += c * point[col];
    switch (sense) {
      case lp::Sense::LessEqual: return act <= rhs;
      case lp::Sense::GreaterEqual: return act >= rhs;
      case lp::Sense::Equal: return act == rhs;
    }
    return false;
  }

  lp::Row to_row() const {
    lp::Row row;
    row.sense = sense;
    row.rhs = to_double(rhs);
    for (const auto& [col, c] : terms) row.terms.emplace_back(col, to_double(c));
    return row;
  }

  std::string signature() const {
    std::ostringstream s;
    for (const auto& [col, c] : terms) s << col << ':' << c << ' ';
    s << static_cast<int>(sense) << ' ' << rhs;
    return s.str();
  }
};

/// MILP over x_(v,A), x_(v,B). In ab-fixed mode the designated vertices a and b
/// carry no columns and enter constraints as constants.
struct VspModel {
  ModelMode mode = ModelMode::Fictitious;
  int n = 0;
  Vertex a = -1, b = -1;
  int beta = 0;
  int alpha_min = 0;
  std::vector<std::array<int, 2>> column_of;  // [vertex][0 = A side, 1 = B side]
  std::vector<Vertex> col_vertex;
  std::vector<Side> col_side;
  std::vector<double> objective, lower, upper;
  std::vector<LinearConstraint> base;
  std::vector<LinearConstraint> cuts;

  int cols() const { return static_cast<int>(col_vertex.size()); }

  int column(Vertex v, Side s) const { return column_of[v][s == Side::A ? 0 : 1]; }

  /// Value of a vertex-side pair without a column (ab-fixed mode only).
  int fixed_value(Vertex v, Side s) const {
    if (v == a) return s == Side::A ? 1 : 0;
    if (v == b) return s == Side::B ? 1 : 0;
    return 0;
  }

  double value(std::span<const double> x, Vertex v, Side s) const {
    const int col = column(v, s);
    return col < 0 ? fixed_value(v, s) : x[col];
  }

  lp::LpProblem relaxation() const {
    lp::LpProblem p;
    p.objective = objective;
    p.lower = lower;
    p.upper = upper;
    for (const auto& c : base) p.rows.push_back(c.to_row());
    for (const auto& c : cuts) p.rows.push_back(c.to_row());
    return p;
  }

  int add_column(Vertex v, Side s, double cost) {
    const int col = cols();
    column_of[v][s == Side::A ? 0 : 1] = col;
    col_vertex.push_back(v);
    col_side.push_back(s);
    objective.push_back(cost);
    lower.push_back(0.0);
    upper.push_back(1.0);
    return col;
  }
};

/// Collects vertex-side terms and folds the ones without a column into the rhs.
class ConstraintBuilder {
 public:
  explicit ConstraintBuilder(const VspModel& m) : model_(m) {}

  ConstraintBuilder& add(Vertex v, Side s, Rational coef) {
    const int col = model_.column(v, s);
    if (col < 0)
      constant_ += coef * model_.fixed_value(v, s);
    else
      terms_[col] += coef;
    return *this;
  }

  LinearConstraint build(lp::Sense sense, Rational rhs, CutOrigin origin) const {
    LinearConstraint c;
    for (const auto& [col, coef] : terms_)
      if (coef.numerator() != 0) c.terms.emplace(col, coef);
    c.sense = sense;
    c.rhs = rhs - constant_;
    c.origin = origin;
    return c;
  }

 private:
  const VspModel& model_;
  std::map<int, Rational> terms_;
  Rational constant_{0};
};

namespace detail {

// Rows that fold down to constants are checked and dropped; rows of the form
// x <= 0 become column fixings.
inline void push_row(VspModel& m, LinearConstraint c) {
  if (c.terms.empty()) {
    std::vector<int> none;
    if (!c.satisfied_by(none)) throw InvalidArgument("model has a contradictory constant row");
    return;
  }
  if (c.terms.size() == 1 && c.sense == lp::Sense::LessEqual && c.rhs.numerator() == 0 && c.terms.begin()->second > 0) {
    m.upper[c.terms.begin()->first] = 0.0;
    return;
  }
  m.base.push_back(std::move(c));
}

inline void add_adjacency_rows(VspModel& m, const Graph& g) {
  for (Vertex v = 0; v < g.n(); ++v) {
    if (m.column(v, Side::A) < 0 && m.column(v, Side::B) < 0) continue;
    push_row(m, ConstraintBuilder(m).add(v, Side::A, 1).add(v, Side::B, 1).build(lp::Sense::LessEqual, 1, CutOrigin::Base));
  }
  for (auto [i, j] : g.edges()) {
    push_row(m, ConstraintBuilder(m).add(i, Side::A, 1).add(j, Side::B, 1).build(lp::Sense::LessEqual, 1, CutOrigin::Base));
    push_row(m, ConstraintBuilder(m).add(j, Side::A, 1).add(i, Side::B, 1).build(lp::Sense::LessEqual, 1, CutOrigin::Base));
  }
}

inline LinearConstraint side_sum(const VspModel& m, Side s, lp::Sense sense, long long rhs) {
  ConstraintBuilder cb(m);
  for (Vertex v = 0; v < m.n; ++v)
    if (m.column(v, s) >= 0) cb.add(v, s, 1);
  return cb.build(sense, rhs, CutOrigin::Base);
}

}  // namespace detail

/// Separator model with a in A and b in B fixed.
inline VspModel build_ab_model(const Graph& g, Vertex a, Vertex b, int beta) {
  if (a < 0 || b < 0 || a >= g.n() || b >= g.n() || a == b) throw InvalidArgument("a and b must be distinct vertices");
  if (g.adjacent(a, b)) throw InvalidArgument("a and b must not be adjacent");
  if (beta < 1) throw InvalidArgument("beta must be at least 1");
  VspModel m;
  m.mode = ModelMode::AbFixed;
  m.n = g.n();
  m.a = a;
  m.b = b;
  m.beta = beta;
  m.column_of.assign(static_cast<std::size_t>(g.n()), {-1, -1});
  for (Vertex v = 0; v < g.n(); ++v)
    if (v != a && v != b) m.add_column(v, Side::A, g.cost(v));
  for (Vertex v = 0; v < g.n(); ++v)
    if (v != a && v != b) m.add_column(v, Side::B, g.cost(v));
  detail::add_adjacency_rows(m, g);
  detail::push_row(m, detail::side_sum(m, Side::A, lp::Sense::LessEqual, beta - 1));
  detail::push_row(m, detail::side_sum(m, Side::B, lp::Sense::LessEqual, beta - 1));
  return m;
}

/// Full model with fictitious a and b: 2n columns, x_(i,A) at column i and
/// x_(i,B) at column n + i.
inline VspModel build_full_model(const Graph& g, int beta, int alpha_min) {
  if (beta < 1) throw InvalidArgument("beta must be at least 1");
  if (alpha_min < 0 || alpha_min > g.n()) throw InvalidArgument("alpha_min out of range");
  VspModel m;
  m.mode = ModelMode::Fictitious;
  m.n = g.n();
  m.beta = beta;
  m.alpha_min = alpha_min;
  m.column_of.assign(static_cast<std::size_t>(g.n()), {-1, -1});
  for (Vertex v = 0; v < g.n(); ++v) m.add_column(v, Side::A, g.cost(v));
  for (Vertex v = 0; v < g.n(); ++v) m.add_column(v, Side::B, g.cost(v));
  detail::add_adjacency_rows(m, g);
  ConstraintBuilder total(m);
  for (Vertex v = 0; v < g.n(); ++v) total.add(v, Side::A, 1).add(v, Side::B, 1);
  m.base.push_back(total.build(lp::Sense::LessEqual, g.n() - alpha_min, CutOrigin::Base));
  m.base.push_back(detail::side_sum(m, Side::A, lp::Sense::GreaterEqual, 1));
  m.base.push_back(detail::side_sum(m, Side::A, lp::Sense::LessEqual, (g.n() - alpha_min) / 2));
  m.base.push_back(detail::side_sum(m, Side::B, lp::Sense::GreaterEqual, 1));
  m.base.push_back(detail::side_sum(m, Side::B, lp::Sense::LessEqual, beta));
  m.base.push_back(detail::side_sum(m, Side::A, lp::Sense::LessEqual, beta));
  return m;
}

/// 0/1 column assignment of a partition; nullopt when the partition contradicts
/// the model's fixed vertices.
inline std::optional<std::vector<int>> encode(const VspModel& m, const VertexPartition& p) {
  auto sides = p.sides(m.n);
  if (m.mode == ModelMode::AbFixed && (sides[m.a] != Side::A || sides[m.b] != Side::B)) return std::nullopt;
  std::vector<int> x(static_cast<std::size_t>(m.cols()), 0);
  for (int col = 0; col < m.cols(); ++col) x[col] = sides[m.col_vertex[col]] == m.col_side[col] ? 1 : 0;
  return x;
}

inline VertexPartition decode_point(const VspModel& m, std::span<const double> x) {
  std::vector<Side> sides(static_cast<std::size_t>(m.n), Side::C);
  for (Vertex v = 0; v < m.n; ++v) {
    if (m.value(x, v, Side::A) > 0.5)
      sides[v] = Side::A;
    else if (m.value(x, v, Side::B) > 0.5)
      sides[v] = Side::B;
  }
  return VertexPartition::from_sides(sides);
}

inline bool satisfies_all(std::span<const LinearConstraint> rows, std::span<const int> point) {
  return std::all_of(rows.begin(), rows.end(), [&](const LinearConstraint& c) { return c.satisfied_by(point); });
}

// ---------------------------------------------------------------- chain cuts

/// Chain inequality of a simple path from `path.front()` to `path.back()`:
/// sum over internal k of (x_kA + x_kB) + x_(front,A) + x_(back,B) <= |I| + 1.
/// In ab-fixed mode the endpoints must be a and b and this reduces to
/// sum over internal k of (x_kA + x_kB) <= |I| - 1.
inline LinearConstraint chain_inequality(const VspModel& m, const Graph& g, std::span<const Vertex> path) {
  if (path.size() < 3) throw InvalidArgument("a chain needs at least one internal vertex");
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!g.adjacent(path[k], path[k + 1])) throw InvalidArgument("consecutive path vertices must be adjacent");
  std::set<Vertex> distinct(path.begin(), path.end());
  if (distinct.size() != path.size()) throw InvalidArgument("path vertices must be distinct");
  if (m.mode == ModelMode::AbFixed && (path.front() != m.a || path.back() != m.b))
    throw InvalidArgument("chain must run from a to b");
  ConstraintBuilder cb(m);
  for (std::size_t k = 1; k + 1 < path.size(); ++k) cb.add(path[k], Side::A, 1).add(path[k], Side::B, 1);
  cb.add(path.front(), Side::A, 1).add(path.back(), Side::B, 1);
  const long long internal = static_cast<long long>(path.size()) - 2;
  return cb.build(lp::Sense::LessEqual, internal + 1, CutOrigin::Chain);
}

struct ScoredCut {
  LinearConstraint cut;
  double violation;
};

namespace detail {

// Dijkstra with vertex weights; dist[v] counts every vertex on the path except
// the source.
inline void vertex_dijkstra(const Graph& g, Vertex source, std::span<const double> weight, Vertex banned,
                            std::vector<double>& dist, std::vector<Vertex>& parent) {
  const int n = g.n();
  dist.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  parent.assign(static_cast<std::size_t>(n), -1);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (Vertex v : g.neighbors(u)) {
      if (v == banned) continue;
      const double nd = d + weight[v];
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = u;
        heap.emplace(nd, v);
      }
    }
  }
}

inline std::vector<Vertex> tree_path(const std::vector<Vertex>& parent, Vertex source, Vertex v) {
  std::vector<Vertex> out;
  for (Vertex u = v; u != -1; u = parent[u]) {
    out.push_back(u);
    if (u == source) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Lightest path source ... k j over internal weights, k a neighbour of j and
// the path avoiding j. Returns the path ending at j, or empty if none.
inline std::vector<Vertex> lightest_chain(const Graph& g, Vertex source, Vertex target, std::span<const double> weight,
                                          const std::vector<double>& dist, const std::vector<Vertex>& parent) {
  double best = std::numeric_limits<double>::infinity();
  for (Vertex k : g.neighbors(target))
    if (k != source) best = std::min(best, dist[k]);
  if (!std::isfinite(best)) return {};
  for (Vertex k : g.neighbors(target)) {
    if (k == source || dist[k] > best) continue;
    auto p = tree_path(parent, source, k);
    if (std::find(p.begin(), p.end(), target) == p.end()) {
      p.push_back(target);
      return p;
    }
  }
  std::vector<double> d2;
  std::vector<Vertex> p2;
  vertex_dijkstra(g, source, weight, target, d2, p2);
  Vertex arg = -1;
  for (Vertex k : g.neighbors(target))
    if (k != source && std::isfinite(d2[k]) && (arg < 0 || d2[k] < d2[arg])) arg = k;
  if (arg < 0) return {};
  auto p = tree_path(p2, source, arg);
  p.push_back(target);
  return p;
}

inline std::vector<ScoredCut> top_cuts(std::vector<ScoredCut> found, int max_cuts) {
  std::stable_sort(found.begin(), found.end(), [](const ScoredCut& l, const ScoredCut& r) { return l.violation > r.violation; });
  if (max_cuts >= 0 && static_cast<int>(found.size()) > max_cuts) found.resize(static_cast<std::size_t>(max_cuts));
  return found;
}

}  // namespace detail

/// Most violated chain inequalities at `x`. Exact for the family: a violated
/// chain inequality exists for an endpoint pair iff one is returned for it.
inline std::vector<ScoredCut> separate_chain(const VspModel& m, const Graph& g, std::span<const double> x, int max_cuts = 50) {
  std::vector<double> weight(static_cast<std::size_t>(g.n()));
  for (Vertex v = 0; v < g.n(); ++v)
    weight[v] = std::max(0.0, 1.0 - m.value(x, v, Side::A) - m.value(x, v, Side::B));
  std::vector<ScoredCut> found;
  std::vector<double> dist;
  std::vector<Vertex> parent;
  auto consider = [&](Vertex i, const std::vector<Vertex>& sinks) {
    detail::vertex_dijkstra(g, i, weight, -1, dist, parent);
    for (Vertex j : sinks) {
      auto path = detail::lightest_chain(g, i, j, weight, dist, parent);
      if (path.size() < 3) continue;
      auto cut = chain_inequality(m, g, path);
      const double viol = cut.violation(x);
      if (viol > kViolationTol) found.push_back({std::move(cut), viol});
    }
  };
  if (m.mode == ModelMode::AbFixed) {
    consider(m.a, {m.b});
  } else {
    for (Vertex i = 0; i < g.n(); ++i) {
      const double xi = m.value(x, i, Side::A);
      if (xi <= kViolationTol) continue;
      std::vector<Vertex> sinks;
      for (Vertex j = 0; j < g.n(); ++j)
        if (j != i && !g.adjacent(i, j) && xi + m.value(x, j, Side::B) > 1.0 + kViolationTol) sinks.push_back(j);
      if (!sinks.empty()) consider(i, sinks);
    }
  }
  return detail::top_cuts(std::move(found), max_cuts);
}

// ----------------------------------------------------------- alpha pair cuts

/// The two pair inequalities for non-adjacent i, j:
///   sum_k (x_kA + x_kB) - alpha_ij (2 - x_iA - x_jB) <= n - alpha_ij
/// and the same with the roles of i and j exchanged. k runs over all vertices
/// with columns.
inline std::array<LinearConstraint, 2> alpha_pair_inequalities(const VspModel& m, const AlphaTable& table, Vertex i, Vertex j) {
  const long long alpha = table.at(i, j);
  auto one = [&](Vertex p, Vertex q) {
    ConstraintBuilder cb(m);
    for (Vertex k = 0; k < m.n; ++k) {
      if (m.column(k, Side::A) >= 0) cb.add(k, Side::A, 1);
      if (m.column(k, Side::B) >= 0) cb.add(k, Side::B, 1);
    }
    cb.add(p, Side::A, alpha).add(q, Side::B, alpha);
    return cb.build(lp::Sense::LessEqual, m.n + alpha, CutOrigin::AlphaPair);
  };
  return {one(i, j), one(j, i)};
}

/// Up to `max_cuts` most violated pair inequalities, by violation then pair order.
inline std::vector<ScoredCut> separate_alpha_pairs(const VspModel& m, const AlphaTable& table, std::span<const double> x,
                                                   int max_cuts = 50) {
  double free_sum = 0.0;
  for (int col = 0; col < m.cols(); ++col) free_sum += x[col];
  std::vector<ScoredCut> found;
  for (auto [i, j] : table.pairs()) {
    const double alpha = table.at(i, j);
    for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
      const double lhs = free_sum + alpha * (m.value(x, p, Side::A) + m.value(x, q, Side::B));
      if (lhs - (m.n + alpha) <= kViolationTol) continue;
      auto cuts = alpha_pair_inequalities(m, table, i, j);
      auto& cut = p == i ? cuts[0] : cuts[1];
      const double viol = cut.violation(x);
      found.push_back({std::move(cut), viol});
    }
  }
  return detail::top_cuts(std::move(found), max_cuts);
}

// ------------------------------------------------------------- subgraph cuts

inline constexpr int kNoAlpha = std::numeric_limits<int>::max();

/// sum over V' of (x_iA + x_iB) <= |V'| - min(alpha0, |V'| - beta). Pass
/// kNoAlpha for alpha0 when V' induces a clique.
inline LinearConstraint subgraph_inequality(const VspModel& m, const Graph& g, std::span<const Vertex> vs, int alpha0) {
  const long long size = static_cast<long long>(vs.size());
  if (size <= m.beta) throw InvalidArgument("subgraph must have more than beta vertices");
  if (!g.induced(vs).connected()) throw DisconnectedGraph("subgraph must induce a connected graph");
  ConstraintBuilder cb(m);
  for (Vertex v : vs) cb.add(v, Side::A, 1).add(v, Side::B, 1);
  const long long drop = std::min<long long>(alpha0, size - m.beta);
  return cb.build(lp::Sense::LessEqual, size - drop, CutOrigin::Subgraph);
}

/// V itself plus BFS balls of beta + 1 vertices, deduplicated, at most 2n sets.
inline std::vector<std::vector<Vertex>> subgraph_candidates(const Graph& g, int beta) {
  std::set<std::vector<Vertex>> seen;
  std::vector<std::vector<Vertex>> out;
  const std::size_t cap = 2 * static_cast<std::size_t>(g.n());
  auto offer = [&](std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    if (out.size() < cap && seen.insert(vs).second) out.push_back(std::move(vs));
  };
  if (g.n() > beta) {
    std::vector<Vertex> all(static_cast<std::size_t>(g.n()));
    std::iota(all.begin(), all.end(), 0);
    offer(all);
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    auto ball = g.component_of(v);
    if (static_cast<int>(ball.size()) <= beta) continue;
    ball.resize(static_cast<std::size_t>(beta) + 1);
    offer(std::move(ball));
  }
  return out;
}

/// Subgraph inequalities for every candidate set. alpha0 is only computed when
/// it can matter, i.e. when |V'| - beta > 1; `table` supplies it for V' = V.
inline std::vector<LinearConstraint> subgraph_family(const VspModel& m, const Graph& g, const AlphaTable* table = nullptr) {
  std::vector<LinearConstraint> out;
  for (const auto& vs : subgraph_candidates(g, m.beta)) {
    const int size = static_cast<int>(vs.size());
    int alpha0 = kNoAlpha;
    if (size - m.beta > 1) {
      if (size == g.n() && table && !table->pairs().empty()) {
        alpha0 = table->alpha_min();
      } else if (!g.induced(vs).complete()) {
        alpha0 = alpha_subgraph(g, vs);
      }
    }
    out.push_back(subgraph_inequality(m, g, vs, alpha0));
  }
  return out;
}

inline std::vector<ScoredCut> separate_subgraph(std::span<const LinearConstraint> family, std::span<const double> x,
                                                int max_cuts = 50) {
  std::vector<ScoredCut> found;
  for (const auto& c : family) {
    const double viol = c.violation(x);
    if (viol > kViolationTol) found.push_back({c, viol});
  }
  return detail::top_cuts(std::move(found), max_cuts);
}

// ------------------------------------------------------------------ cut pool

/// Deduplicating store of generated cuts.
class CutPool {
 public:
  /// Adds the cut unless an identical one is present; returns whether it was new.
  bool add(const LinearConstraint& c) {
    if (!seen_.insert(c.signature()).second) return false;
    cuts_.push_back(c);
    return true;
  }

  bool contains(const LinearConstraint& c) const { return seen_.count(c.signature()) > 0; }
  const std::vector<LinearConstraint>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

  std::size_t count(CutOrigin origin) const {
    return static_cast<std::size_t>(std::count_if(cuts_.begin(), cuts_.end(), [&](const auto& c) { return c.origin == origin; }));
  }

 private:
  std::set<std::string> seen_;
  std::vector<LinearConstraint> cuts_;
};

// ------------------------------------------------------------------ LP export

inline std::string column_name(const VspModel& m, int col) {
  return "x" + std::to_string(m.col_vertex[col] + 1) + (m.col_side[col] == Side::A ? "a" : "b");
}

namespace detail {

inline void write_terms(std::ostream& out, const VspModel& m, const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (auto [col, c] : terms) {
    const bool negative = c < 0;
    out << (first ? (negative ? "- " : "") : (negative ? " - " : " + "));
    if (std::abs(c) != 1.0) out << std::abs(c) << ' ';
    out << column_name(m, col);
    first = false;
  }
  if (first) out << "0 " << column_name(m, 0);
}

}  // namespace detail

/// Writes the model (base rows plus the given cuts) in CPLEX LP text format.
inline void write_lp(std::ostream& out, const VspModel& m, std::span<const LinearConstraint> extra = {}) {
  out << "\\ vertex separator model, " << (m.mode == ModelMode::AbFixed ? "ab-fixed" : "fictitious") << " mode\n";
  out << "Maximize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (int col = 0; col < m.cols(); ++col)
    if (m.objective[col] != 0.0) obj.emplace_back(col, m.objective[col]);
  detail::write_terms(out, m, obj);
  out << "\nSubject To\n";
  int k = 0;
  auto row = [&](const LinearConstraint& c) {
    out << ' ' << to_string(c.origin) << '_' << k++ << ": ";
    detail::write_terms(out, m, c.to_row().terms);
    out << (c.sense == lp::Sense::LessEqual ? " <= " : c.sense == lp::Sense::GreaterEqual ? " >= " : " = ") << to_double(c.rhs) << '\n';
  };
  for (const auto& c : m.base) row(c);
  for (const auto& c : m.cuts) row(c);
  for (const auto& c : extra) row(c);
  out << "Bounds\n";
  for (int col = 0; col < m.cols(); ++col) out << ' ' << m.lower[col] << " <= " << column_name(m, col) << " <= " << m.upper[col] << '\n';
  out << "Binaries\n";
  for (int col = 0; col < m.cols(); ++col) out << ' ' << column_name(m, col) << '\n';
  out << "End\n";
}

}  // namespace vsp
