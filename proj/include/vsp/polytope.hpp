#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "connectivity.hpp"
#include "graph.hpp"
#include "lp.hpp"
#include "model.hpp"

namespace vsp::lab {

inline constexpr int kMaxEnumerationVertices = 14;
inline constexpr int kMaxEdgeSystemVertices = 10;

using IncidenceVector = std::vector<int>;

/// All ab-separator incidence vectors for a fixed pair (a, b).
///
/// Coordinates follow `free` (V minus {a, b}, increasing): the first
/// free.size() entries are the A indicators, the next free.size() the B ones.
struct PointSet {
  int n = 0;
  Vertex a = -1;
  Vertex b = -1;
  std::vector<Vertex> free;
  std::vector<IncidenceVector> points;

  int dimension() const { return 2 * static_cast<int>(free.size()); }

  VertexPartition partition(std::size_t k) const {
    VertexPartition p;
    p.A.push_back(a);
    p.B.push_back(b);
    const auto& x = points[k];
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (x[i]) p.A.push_back(free[i]);
      else if (x[i + free.size()]) p.B.push_back(free[i]);
      else p.C.push_back(free[i]);
    }
    p.normalize();
    return p;
  }
};

namespace detail {

inline void require_pair(const Graph& g, Vertex a, Vertex b) {
  if (a < 0 || b < 0 || a >= g.n() || b >= g.n() || a == b) throw InvalidArgument("a and b must be distinct vertices");
  if (g.adjacent(a, b)) throw InvalidArgument("a and b are adjacent");
}

}  // namespace detail

/// Depth-first enumeration over free vertices with pruning on A-B edges and
/// the size bound. Points come out in lexicographic side order (A < B < C).
inline PointSet enumerate_ab_separators(const Graph& g, Vertex a, Vertex b, int beta) {
  if (g.n() > kMaxEnumerationVertices)
    throw GuardExceeded("separator enumeration is limited to " + std::to_string(kMaxEnumerationVertices) + " vertices");
  detail::require_pair(g, a, b);
  PointSet ps;
  ps.n = g.n();
  ps.a = a;
  ps.b = b;
  for (Vertex v = 0; v < g.n(); ++v)
    if (v != a && v != b) ps.free.push_back(v);
  if (beta < 1) return ps;
  const std::size_t k = ps.free.size();
  std::vector<Side> side(static_cast<std::size_t>(g.n()), Side::C);
  std::vector<char> placed(static_cast<std::size_t>(g.n()), 0);
  side[a] = Side::A;
  side[b] = Side::B;
  placed[a] = placed[b] = 1;
  int size_a = 1, size_b = 1;
  auto clashes = [&](Vertex v, Side s) {
    const Side other = s == Side::A ? Side::B : Side::A;
    for (Vertex w : g.neighbors(v))
      if (placed[w] && side[w] == other) return true;
    return false;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      IncidenceVector x(2 * k, 0);
      for (std::size_t t = 0; t < k; ++t) {
        if (side[ps.free[t]] == Side::A) x[t] = 1;
        else if (side[ps.free[t]] == Side::B) x[t + k] = 1;
      }
      ps.points.push_back(std::move(x));
      return;
    }
    const Vertex v = ps.free[i];
    placed[v] = 1;
    if (size_a < beta && !clashes(v, Side::A)) {
      side[v] = Side::A;
      ++size_a;
      self(self, i + 1);
      --size_a;
    }
    if (size_b < beta && !clashes(v, Side::B)) {
      side[v] = Side::B;
      ++size_b;
      self(self, i + 1);
      --size_b;
    }
    side[v] = Side::C;
    self(self, i + 1);
    placed[v] = 0;
  };
  rec(rec, 0);
  return ps;
}

/// Rank of an integer matrix by fraction-free elimination; rows are reduced
/// against an echelon basis and divided by their content after each step.
inline int integer_rank(std::span<const std::vector<long long>> rows) {
  std::vector<std::vector<long long>> basis;
  std::vector<std::size_t> pivot;
  auto mul = [](long long x, long long y) {
    long long out = 0;
    if (__builtin_mul_overflow(x, y, &out)) throw InternalError("integer overflow in rank computation");
    return out;
  };
  std::size_t width = rows.empty() ? 0 : rows.front().size();
  for (const auto& source : rows) {
    if (source.size() != width) throw InvalidArgument("ragged matrix");
    auto r = source;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const long long f = r[pivot[k]];
      if (f == 0) continue;
      const long long p = basis[k][pivot[k]];
      for (std::size_t c = 0; c < width; ++c) {
        long long out = 0;
        if (__builtin_sub_overflow(mul(p, r[c]), mul(f, basis[k][c]), &out)) throw InternalError("integer overflow in rank computation");
        r[c] = out;
      }
      long long content = 0;
      for (long long v : r) content = std::gcd(content, v);
      if (content > 1)
        for (auto& v : r) v /= content;
    }
    auto lead = std::find_if(r.begin(), r.end(), [](long long v) { return v != 0; });
    if (lead == r.end()) continue;
    pivot.push_back(static_cast<std::size_t>(lead - r.begin()));
    basis.push_back(std::move(r));
    if (basis.size() == width) break;
  }
  return static_cast<int>(basis.size());
}

/// Dimension of the affine hull: rank of the differences to the first point.
inline int affine_dimension(std::span<const IncidenceVector> points) {
  if (points.empty()) throw InvalidArgument("affine dimension of an empty point set");
  std::vector<std::vector<long long>> diff;
  diff.reserve(points.size() - 1);
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].size() != points[0].size()) throw InvalidArgument("points of different dimension");
    std::vector<long long> row(points[0].size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = points[k][c] - points[0][c];
    diff.push_back(std::move(row));
  }
  return integer_rank(diff);
}

inline int affine_dimension(const PointSet& ps) { return affine_dimension(std::span<const IncidenceVector>(ps.points)); }

/// 2(n-2) - (deg a + deg b), the closed form for dim P_ab.
inline int predicted_dimension(const Graph& g, Vertex a, Vertex b) {
  detail::require_pair(g, a, b);
  return 2 * (g.n() - 2) - (g.degree(a) + g.degree(b));
}

// ---------------------------------------------------------------------------
// Edge model

/// A-C edges carry label AC, B-C edges label BC; all others None.
enum class EdgeLabel : std::uint8_t { None, AC, BC };

inline const char* to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::None: return "none";
    case EdgeLabel::AC: return "F1";
    case EdgeLabel::BC: return "F2";
  }
  return "unknown";
}

/// One value per edge of the graph, indexed like Graph::edges().
struct EdgeIncidence {
  std::vector<Edge> edges;
  std::vector<double> value;
  std::vector<EdgeLabel> label;

  std::size_t size() const { return edges.size(); }

  std::vector<int> integral() const {
    std::vector<int> out(value.size());
    for (std::size_t k = 0; k < value.size(); ++k) out[k] = value[k] > 0.5 ? 1 : 0;
    return out;
  }
};

/// Maps (u, v) to its position in Graph::edges().
class EdgeIndex {
 public:
  explicit EdgeIndex(const Graph& g) : n_(g.n()), edges_(g.edges()), index_(static_cast<std::size_t>(n_) * n_, -1) {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      auto [u, v] = edges_[k];
      index_[static_cast<std::size_t>(u) * n_ + v] = index_[static_cast<std::size_t>(v) * n_ + u] = static_cast<int>(k);
    }
  }

  int operator()(Vertex u, Vertex v) const { return index_[static_cast<std::size_t>(u) * n_ + v]; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> index_;
};

/// Edge incidence of the cut between A u B and C. A negative beta skips the
/// size bound when checking the partition.
inline EdgeIncidence vertex_to_edge(const Graph& g, const VertexPartition& p, int beta = -1) {
  const auto verdict = validate_partition(g, p, beta < 0 ? g.n() : beta);
  if (!verdict.feasible()) throw InvalidArgument(std::string("infeasible partition: ") + to_string(verdict.violation));
  const auto sides = p.sides(g.n());
  EdgeIncidence chi;
  chi.edges = g.edges();
  chi.value.resize(chi.edges.size(), 0.0);
  chi.label.resize(chi.edges.size(), EdgeLabel::None);
  for (std::size_t k = 0; k < chi.edges.size(); ++k) {
    auto [u, v] = chi.edges[k];
    const bool cu = sides[u] == Side::C, cv = sides[v] == Side::C;
    if (cu == cv) continue;
    chi.value[k] = 1.0;
    const Side kept = cu ? sides[v] : sides[u];
    chi.label[k] = kept == Side::A ? EdgeLabel::AC : EdgeLabel::BC;
  }
  return chi;
}

inline EdgeIncidence make_incidence(const Graph& g, std::span<const double> values) {
  EdgeIncidence chi;
  chi.edges = g.edges();
  if (values.size() != chi.edges.size()) throw InvalidArgument("edge vector size does not match the edge count");
  chi.value.assign(values.begin(), values.end());
  chi.label.assign(chi.edges.size(), EdgeLabel::None);
  return chi;
}

/// Simple paths from s to t, as vertex sequences, by depth-first search.
inline std::vector<std::vector<Vertex>> simple_paths(const Graph& g, Vertex s, Vertex t) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> path{s};
  std::vector<char> on(static_cast<std::size_t>(g.n()), 0);
  on[s] = 1;
  auto rec = [&](auto&& self, Vertex u) -> void {
    for (Vertex w : g.neighbors(u)) {
      if (on[w]) continue;
      path.push_back(w);
      if (w == t) {
        out.push_back(path);
      } else {
        on[w] = 1;
        self(self, w);
        on[w] = 0;
      }
      path.pop_back();
    }
  };
  rec(rec, s);
  return out;
}

/// Simple cycles (length >= 3), each listed once starting at its smallest vertex.
inline std::vector<std::vector<Vertex>> simple_cycles(const Graph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<char> on(static_cast<std::size_t>(g.n()), 0);
  std::vector<Vertex> path;
  for (Vertex s = 0; s < g.n(); ++s) {
    path.assign(1, s);
    on[s] = 1;
    auto rec = [&](auto&& self, Vertex u) -> void {
      for (Vertex w : g.neighbors(u)) {
        if (w < s) continue;
        if (w == s) {
          if (path.size() >= 3 && path[1] < path.back()) out.push_back(path);
          continue;
        }
        if (on[w]) continue;
        on[w] = 1;
        path.push_back(w);
        self(self, w);
        path.pop_back();
        on[w] = 0;
      }
    };
    rec(rec, s);
    on[s] = 0;
  }
  return out;
}

enum class EdgeFamily : std::uint8_t { ChainCrossing, OddChainSubset, OddCycleSubset };

inline const char* to_string(EdgeFamily f) {
  switch (f) {
    case EdgeFamily::ChainCrossing: return "chain_crossing";
    case EdgeFamily::OddChainSubset: return "odd_chain_subset";
    case EdgeFamily::OddCycleSubset: return "odd_cycle_subset";
  }
  return "unknown";
}

struct EdgeViolation {
  EdgeFamily family;
  std::vector<Vertex> walk;      // the a-b chain or the cycle (closing edge implied)
  std::vector<int> subset;       // edge indices of the odd subset; empty for chain crossing
  double amount = 0.0;
};

struct EdgeSystemReport {
  long chains = 0;
  long cycles = 0;
  std::array<long, 3> checked{};
  std::array<long, 3> violated{};
  std::vector<EdgeViolation> violations;  // first kMaxRecorded only

  static constexpr std::size_t kMaxRecorded = 64;

  bool holds(EdgeFamily f) const { return violated[static_cast<std::size_t>(f)] == 0; }
  bool holds() const { return violated[0] == 0 && violated[1] == 0 && violated[2] == 0; }
};

namespace detail {

inline std::vector<int> walk_edges(const EdgeIndex& index, std::span<const Vertex> walk, bool closed) {
  std::vector<int> out;
  for (std::size_t k = 0; k + 1 < walk.size(); ++k) out.push_back(index(walk[k], walk[k + 1]));
  if (closed) out.push_back(index(walk.back(), walk.front()));
  return out;
}

/// Most violated odd subset S of `edges`:
/// max over odd S of  chi(S) - chi(rest) - (|S| - 1).
/// Each edge contributes chi - 1 inside S and -chi outside; parity is
/// repaired by flipping the edge with the smallest loss.
inline std::pair<double, std::vector<int>> worst_odd_subset(std::span<const int> edges, std::span<const double> chi) {
  double total = 1.0;
  std::vector<char> in(edges.size(), 0);
  std::size_t count = 0, cheapest = 0;
  double cheapest_loss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double x = chi[static_cast<std::size_t>(edges[k])];
    const double gain = 2.0 * x - 1.0;
    if (gain > 0) {
      in[k] = 1;
      ++count;
      total += x - 1.0;
    } else {
      total -= x;
    }
    if (std::abs(gain) < cheapest_loss) {
      cheapest_loss = std::abs(gain);
      cheapest = k;
    }
  }
  if (count % 2 == 0) {
    in[cheapest] ^= 1;
    total -= cheapest_loss;
  }
  std::vector<int> subset;
  for (std::size_t k = 0; k < edges.size(); ++k)
    if (in[k]) subset.push_back(edges[k]);
  return {total, subset};
}

}  // namespace detail

/// The edge system for one pair (a, b): every a-b chain and every cycle of g,
/// enumerated once and evaluated against any number of edge vectors.
/// Odd subsets are checked exactly by solving the per-walk maximization.
class EdgeSystem {
 public:
  EdgeSystem(const Graph& g, Vertex a, Vertex b) : edge_count_(g.edge_count()) {
    if (g.n() > kMaxEdgeSystemVertices)
      throw GuardExceeded("edge system check is limited to " + std::to_string(kMaxEdgeSystemVertices) + " vertices");
    detail::require_pair(g, a, b);
    const EdgeIndex index(g);
    chains_ = simple_paths(g, a, b);
    cycles_ = simple_cycles(g);
    for (const auto& path : chains_) chain_edges_.push_back(detail::walk_edges(index, path, false));
    for (const auto& cycle : cycles_) cycle_edges_.push_back(detail::walk_edges(index, cycle, true));
  }

  std::size_t chains() const { return chains_.size(); }
  std::size_t cycles() const { return cycles_.size(); }

  EdgeSystemReport check(const EdgeIncidence& chi) const {
    if (chi.size() != edge_count_) throw InvalidArgument("edge vector size does not match the edge count");
    EdgeSystemReport report;
    report.chains = static_cast<long>(chains_.size());
    report.cycles = static_cast<long>(cycles_.size());
    auto record = [&](EdgeFamily f, const std::vector<Vertex>& walk, std::vector<int> subset, double amount) {
      ++report.violated[static_cast<std::size_t>(f)];
      if (report.violations.size() < EdgeSystemReport::kMaxRecorded) report.violations.push_back({f, walk, std::move(subset), amount});
    };
    for (std::size_t k = 0; k < chains_.size(); ++k) {
      const auto& edges = chain_edges_[k];
      double crossing = 0.0;
      for (int e : edges) crossing += chi.value[static_cast<std::size_t>(e)];
      ++report.checked[0];
      if (crossing < 2.0 - kViolationTol) record(EdgeFamily::ChainCrossing, chains_[k], {}, 2.0 - crossing);
      ++report.checked[1];
      auto [amount, subset] = detail::worst_odd_subset(edges, chi.value);
      if (amount > kViolationTol) record(EdgeFamily::OddChainSubset, chains_[k], std::move(subset), amount);
    }
    for (std::size_t k = 0; k < cycles_.size(); ++k) {
      ++report.checked[2];
      auto [amount, subset] = detail::worst_odd_subset(cycle_edges_[k], chi.value);
      if (amount > kViolationTol) record(EdgeFamily::OddCycleSubset, cycles_[k], std::move(subset), amount);
    }
    return report;
  }

 private:
  std::size_t edge_count_;
  std::vector<std::vector<Vertex>> chains_, cycles_;
  std::vector<std::vector<int>> chain_edges_, cycle_edges_;
};

inline EdgeSystemReport check_edge_system(const Graph& g, Vertex a, Vertex b, const EdgeIncidence& chi) {
  return EdgeSystem(g, a, b).check(chi);
}

// ---------------------------------------------------------------------------
// Integral correspondence between the edge system and ab-separators

struct CorrespondenceReport {
  long separators = 0;        // enumerated ab-separators
  long images = 0;            // distinct edge images of those separators
  long images_failing = 0;    // images violating the edge system
  long system_points = 0;     // integral points of the edge system
  long matched = 0;           // system points that are images
  long beta_explained = 0;    // system points realizable only when the size bound is dropped
  long unexplained = 0;
  std::vector<std::vector<int>> unexplained_points;

  bool consistent() const { return images_failing == 0 && unexplained == 0 && matched == images; }
};

/// Integral edge vectors with an even count on every cycle are exactly the
/// cuts delta(S); S ranges over subsets avoiding a, which lists each cut once.
inline std::vector<std::vector<int>> cut_vectors(const Graph& g, Vertex anchor) {
  if (g.n() > 20) throw GuardExceeded("cut enumeration is limited to 20 vertices");
  const auto edges = g.edges();
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << g.n()); ++mask) {
    if (mask >> anchor & 1) continue;
    std::vector<int> chi(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) chi[k] = ((mask >> edges[k].first) ^ (mask >> edges[k].second)) & 1;
    out.push_back(std::move(chi));
  }
  return out;
}

/// Compares the integral points of the edge system with the images of the
/// ab-separators. A system point C = S that fails only the size bound is
/// reported as beta-explained.
inline CorrespondenceReport edge_correspondence(const Graph& g, Vertex a, Vertex b, int beta) {
  if (g.n() > kMaxEdgeSystemVertices) throw GuardExceeded("edge correspondence is limited to " + std::to_string(kMaxEdgeSystemVertices) + " vertices");
  CorrespondenceReport report;
  const EdgeSystem system(g, a, b);
  const auto ps = enumerate_ab_separators(g, a, b, beta);
  report.separators = static_cast<long>(ps.points.size());
  std::set<std::vector<int>> images;
  for (std::size_t k = 0; k < ps.points.size(); ++k) {
    const auto chi = vertex_to_edge(g, ps.partition(k), beta);
    if (images.insert(chi.integral()).second && !system.check(chi).holds()) ++report.images_failing;
  }
  report.images = static_cast<long>(images.size());
  const auto relaxed = enumerate_ab_separators(g, a, b, g.n());
  std::set<std::vector<int>> relaxed_images;
  for (std::size_t k = 0; k < relaxed.points.size(); ++k) relaxed_images.insert(vertex_to_edge(g, relaxed.partition(k)).integral());
  for (const auto& chi : cut_vectors(g, a)) {
    std::vector<double> values(chi.begin(), chi.end());
    if (!system.check(make_incidence(g, values)).holds()) continue;
    ++report.system_points;
    if (images.count(chi)) {
      ++report.matched;
    } else if (relaxed_images.count(chi)) {
      ++report.beta_explained;
    } else {
      ++report.unexplained;
      report.unexplained_points.push_back(chi);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fractional vertices of the relaxed edge system

/// Rows of the relaxed edge system with every odd subset listed explicitly.
inline lp::LpProblem edge_relaxation(const Graph& g, Vertex a, Vertex b) {
  detail::require_pair(g, a, b);
  const EdgeIndex index(g);
  lp::LpProblem p;
  for (std::size_t k = 0; k < index.edges().size(); ++k) p.add_column(0.0, 0.0, 1.0);
  auto odd_rows = [&](const std::vector<int>& edges) {
    if (edges.size() > 16) throw GuardExceeded("walk too long for explicit odd-subset rows");
    for (std::uint32_t mask = 1; mask < (1u << edges.size()); ++mask) {
      const int size = std::popcount(mask);
      if (size % 2 == 0) continue;
      lp::Row row;
      for (std::size_t k = 0; k < edges.size(); ++k) row.terms.emplace_back(edges[k], (mask >> k & 1) ? 1.0 : -1.0);
      row.rhs = size - 1;
      p.rows.push_back(std::move(row));
    }
  };
  for (const auto& path : simple_paths(g, a, b)) {
    const auto edges = detail::walk_edges(index, path, false);
    lp::Row crossing;
    for (int e : edges) crossing.terms.emplace_back(e, 1.0);
    crossing.sense = lp::Sense::GreaterEqual;
    crossing.rhs = 2.0;
    p.rows.push_back(std::move(crossing));
    odd_rows(edges);
  }
  for (const auto& cycle : simple_cycles(g)) odd_rows(detail::walk_edges(index, cycle, true));
  return p;
}

/// Optimizes random objectives over the relaxed edge system and collects
/// the distinct fractional optimal vertices found.
inline std::vector<std::vector<double>> fractional_vertices(const Graph& g, Vertex a, Vertex b, int trials, std::uint64_t seed) {
  if (g.n() > 8) throw GuardExceeded("fractional vertex search is limited to 8 vertices");
  auto p = edge_relaxation(g, a, b);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::set<std::vector<double>> found;
  for (int t = 0; t < trials; ++t) {
    for (auto& c : p.objective) c = coef(rng);
    const auto sol = lp::solve_lp(p);
    if (sol.status != lp::LpStatus::Optimal) continue;
    std::vector<double> x(sol.x.size());
    bool fractional = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = std::round(sol.x[k] * 1e6) / 1e6;
      if (std::abs(x[k] - std::round(x[k])) > 1e-6) fractional = true;
    }
    if (fractional) found.insert(x);
  }
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Model inequalities on enumerated points

struct CutValidityReport {
  long points = 0;
  long inequalities = 0;
  long checks = 0;
  long violations = 0;
  std::map<CutOrigin, long> per_family;
  std::string first_failure;
};

/// Every base row and every chain, alpha-pair and subgraph inequality of the
/// ab model for (a, b), evaluated on every enumerated ab-separator.
inline CutValidityReport check_model_cuts(const Graph& g, Vertex a, Vertex b, int beta, const AlphaTable& table) {
  const auto ps = enumerate_ab_separators(g, a, b, beta);
  CutValidityReport report;
  if (ps.points.empty()) return report;
  const auto m = build_ab_model(g, a, b, beta);
  std::vector<LinearConstraint> rows = m.base;
  for (auto& c : subgraph_family(m, g, &table)) rows.push_back(std::move(c));
  for (auto [i, j] : table.pairs())
    for (auto& c : alpha_pair_inequalities(m, table, i, j)) rows.push_back(std::move(c));
  for (const auto& path : simple_paths(g, a, b)) rows.push_back(chain_inequality(m, g, path));
  report.inequalities = static_cast<long>(rows.size());
  for (const auto& c : rows) ++report.per_family[c.origin];
  for (std::size_t k = 0; k < ps.points.size(); ++k) {
    const auto x = encode(m, ps.partition(k));
    ++report.points;
    if (!x) {
      ++report.violations;
      if (report.first_failure.empty()) report.first_failure = "separator outside the model bounds";
      continue;
    }
    for (const auto& c : rows) {
      ++report.checks;
      if (!c.satisfied_by(*x)) {
        ++report.violations;
        if (report.first_failure.empty()) report.first_failure = std::string(to_string(c.origin)) + " inequality violated";
      }
    }
  }
  return report;
}

}  // namespace vsp::lab
