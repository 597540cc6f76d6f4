#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vsp/generators.hpp"
#include "vsp/model.hpp"

using namespace vsp;

namespace {

// Integer optimum of a model by enumerating every side assignment of the
// vertices that carry columns. Test-only, 3^k.
double model_integer_optimum(const VspModel& m, bool& feasible) {
  std::vector<Vertex> free;
  for (Vertex v = 0; v < m.n; ++v)
    if (m.column(v, Side::A) >= 0) free.push_back(v);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < free.size(); ++k) total *= 3;
  feasible = false;
  double best = -1.0;
  std::vector<int> x(static_cast<std::size_t>(m.cols()));
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    std::fill(x.begin(), x.end(), 0);
    for (Vertex v : free) {
      if (c % 3 == 1) x[m.column(v, Side::A)] = 1;
      if (c % 3 == 2) x[m.column(v, Side::B)] = 1;
      c /= 3;
    }
    bool ok = satisfies_all(m.base, x);
    for (int col = 0; ok && col < m.cols(); ++col) ok = x[col] >= m.lower[col] && x[col] <= m.upper[col];
    if (!ok) continue;
    feasible = true;
    double val = 0.0;
    for (int col = 0; col < m.cols(); ++col) val += m.objective[col] * x[col];
    best = std::max(best, val);
  }
  return best;
}

bool in_bounds(const VspModel& m, const std::vector<int>& x) {
  for (int col = 0; col < m.cols(); ++col)
    if (x[col] < m.lower[col] || x[col] > m.upper[col]) return false;
  return true;
}

// Random point with x_A + x_B <= 1 per vertex.
std::vector<double> random_point(const VspModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(m.cols()), 0.0);
  for (Vertex v = 0; v < m.n; ++v) {
    const int ca = m.column(v, Side::A), cb = m.column(v, Side::B);
    if (ca < 0) continue;
    double xa = u(rng), xb = u(rng);
    if (xa + xb > 1.0) {
      xa = 1.0 - xa;
      xb = 1.0 - xb;
    }
    x[ca] = std::min(xa, m.upper[ca]);
    x[cb] = std::min(xb, m.upper[cb]);
  }
  return x;
}

// Largest chain violation over every simple path between every ordered pair
// allowed by the model mode.
double worst_chain_violation(const VspModel& m, const Graph& g, std::span<const double> x) {
  double worst = -1e9;
  auto scan = [&](Vertex i, Vertex j) {
    for (const auto& path : oracle::simple_paths(g, i, j)) {
      if (path.size() < 3) continue;
      worst = std::max(worst, chain_inequality(m, g, path).violation(x));
    }
  };
  if (m.mode == ModelMode::AbFixed) {
    scan(m.a, m.b);
  } else {
    for (Vertex i = 0; i < g.n(); ++i)
      for (Vertex j = 0; j < g.n(); ++j)
        if (i != j && !g.adjacent(i, j)) scan(i, j);
  }
  return worst;
}

}  // namespace

TEST(AbModel, PathOfThreeHasOnlyTheZeroPoint) {
  Graph g = gen::path(3);
  auto m = build_ab_model(g, 0, 2, 2);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m.upper[0], 0.0);
  EXPECT_EQ(m.upper[1], 0.0);
  bool feasible = false;
  EXPECT_EQ(model_integer_optimum(m, feasible), 0.0);
  EXPECT_TRUE(feasible);
}

TEST(AbModel, FourCycleOppositeCorners) {
  Graph g = gen::cycle(4);
  auto m = build_ab_model(g, 0, 2, 2);
  bool feasible = false;
  EXPECT_EQ(model_integer_optimum(m, feasible), 0.0);
}

TEST(AbModel, PathOfFive) {
  Graph g = gen::path(5);
  auto m = build_ab_model(g, 0, 4, 3);
  bool feasible = false;
  EXPECT_EQ(model_integer_optimum(m, feasible), 2.0);
}

TEST(AbModel, RejectsAdjacentPair) {
  EXPECT_THROW(build_ab_model(gen::path(3), 0, 1, 2), InvalidArgument);
  EXPECT_THROW(build_ab_model(gen::path(3), 0, 0, 2), InvalidArgument);
  EXPECT_THROW(build_ab_model(gen::path(3), 0, 2, 0), InvalidArgument);
}

TEST(FullModel, PathOfThree) {
  Graph g = gen::path(3);
  auto m = build_full_model(g, 2, 1);
  EXPECT_EQ(m.cols(), 6);
  bool feasible = false;
  EXPECT_EQ(model_integer_optimum(m, feasible), 2.0);
  EXPECT_THROW(build_full_model(g, 0, 1), InvalidArgument);
}

TEST(FullModel, CardinalityRowUsesAlphaMin) {
  auto g = gen::random_connected(24, 0.2, 1);
  auto m = build_full_model(g, 16, 8);
  bool found = false;
  for (const auto& c : m.base)
    if (c.terms.size() == 48u && c.sense == lp::Sense::LessEqual) {
      EXPECT_EQ(c.rhs, Rational(16));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(FullModel, IntegralPointsAreExactlyFeasiblePartitions) {
  // a point satisfies the base rows iff it encodes a feasible partition, for
  // partitions in the orientation |A| <= |B|
  std::vector<Graph> graphs;
  for (int n = 3; n <= 6; ++n)
    for (auto& g : gen::all_connected_graphs(n))
      if (!g.complete()) graphs.push_back(g);
  for (std::uint64_t seed = 0; seed < 6; ++seed) graphs.push_back(gen::random_connected(8, 0.3 + 0.05 * seed, seed));
  for (const auto& g : graphs) {
    const int n = g.n();
    const int amin = alpha_min(g);
    for (int beta : {default_beta(n), (n + 1) / 2, n - 1}) {
      auto m = build_full_model(g, beta, amin);
      std::uint64_t total = 1;
      for (int k = 0; k < n; ++k) total *= 3;
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<Side> side(static_cast<std::size_t>(n));
        std::uint64_t c = code;
        for (int v = 0; v < n; ++v, c /= 3) side[v] = static_cast<Side>(c % 3);
        auto p = VertexPartition::from_sides(side);
        auto x = *encode(m, p);
        const bool rows_ok = satisfies_all(m.base, x);
        const bool feasible = validate_partition(g, p, beta).feasible();
        if (rows_ok) {
          ASSERT_TRUE(feasible);
          std::vector<double> xd(x.begin(), x.end());
          EXPECT_EQ(decode_point(m, xd), p);
        }
        if (feasible && p.A.size() <= p.B.size()) {
          ASSERT_TRUE(rows_ok);
        }
      }
    }
  }
}

TEST(FullModel, OptimumMatchesBestAbModelAndOracle) {
  std::vector<Graph> graphs;
  for (int n = 3; n <= 5; ++n)
    for (auto& g : gen::all_connected_graphs(n))
      if (!g.complete()) graphs.push_back(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) graphs.push_back(gen::random_connected(7, 0.25 + 0.05 * (seed % 5), seed));
  for (const auto& g : graphs) {
    const int beta = default_beta(g.n());
    bool feasible = false;
    const double full = model_integer_optimum(build_full_model(g, beta, alpha_min(g)), feasible);
    const double expected = oracle::best_kept_cost(g, beta);
    if (expected < 0) {
      EXPECT_FALSE(feasible);
      continue;
    }
    EXPECT_EQ(full, expected);
    double best_pair = -1.0;
    for (Vertex a = 0; a < g.n(); ++a)
      for (Vertex b = a + 1; b < g.n(); ++b) {
        if (g.adjacent(a, b)) continue;
        bool ok = false;
        const double v = model_integer_optimum(build_ab_model(g, a, b, beta), ok);
        if (ok) best_pair = std::max(best_pair, v + 2.0);
      }
    EXPECT_EQ(best_pair, expected);
  }
}

TEST(FullModel, EncodeRespectsFixedVertices) {
  Graph g = gen::path(4);
  auto m = build_ab_model(g, 0, 3, 2);
  EXPECT_FALSE(encode(m, VertexPartition{{3}, {0}, {1, 2}}).has_value());
  auto x = encode(m, VertexPartition{{0, 1}, {3}, {2}});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[m.column(1, Side::A)], 1);
}

TEST(Chain, ExamplesInAbMode) {
  Graph g = gen::path(3);
  auto m = build_ab_model(g, 0, 2, 2);
  std::vector<Vertex> p{0, 1, 2};
  auto c = chain_inequality(m, g, p);
  EXPECT_EQ(c.rhs, Rational(0));
  EXPECT_EQ(c.terms.size(), 2u);

  Graph h = gen::path(4);
  auto m4 = build_ab_model(h, 0, 3, 3);
  std::vector<Vertex> q{0, 1, 2, 3};
  auto d = chain_inequality(m4, h, q);
  EXPECT_EQ(d.rhs, Rational(1));
  EXPECT_EQ(d.terms.size(), 4u);
  EXPECT_EQ(d.origin, CutOrigin::Chain);
  std::vector<Vertex> wrong{1, 2, 3};
  EXPECT_THROW(chain_inequality(m4, h, wrong), InvalidArgument);
  std::vector<Vertex> gap{0, 2, 3};
  EXPECT_THROW(chain_inequality(m4, h, gap), InvalidArgument);
}

TEST(Chain, ForcedMiddleVertexIsSeparated) {
  Graph g = gen::path(3);
  auto m = build_ab_model(g, 0, 2, 2);
  std::vector<double> zero(2, 0.0);
  EXPECT_TRUE(separate_chain(m, g, zero).empty());
  std::vector<double> x{0.6, 0.6};
  auto cuts = separate_chain(m, g, x);
  ASSERT_EQ(cuts.size(), 1u);
  EXPECT_EQ(cuts[0].cut.rhs, Rational(0));
}

// Summing the edge rows along a path reproduces the chain inequality, so no
// point of the relaxation violates it.
TEST(Chain, NeverViolatedByRelaxationOptima) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 6 + static_cast<int>(seed % 5);
    auto g = gen::random_connected(n, 0.3, seed);
    std::vector<VspModel> models{build_full_model(g, default_beta(n), 1)};
    auto [a, b] = detail::non_adjacent_pairs(g).front();
    models.push_back(build_ab_model(g, a, b, default_beta(n)));
    for (const auto& m : models)
      for (int trial = 0; trial < 5; ++trial) {
        auto p = m.relaxation();
        for (auto& c : p.objective) c = u(rng);
        auto sol = lp::solve_lp(p);
        ASSERT_EQ(sol.status, lp::LpStatus::Optimal);
        EXPECT_TRUE(separate_chain(m, g, sol.x, 1000).empty()) << "seed " << seed;
      }
  }
}

TEST(Chain, SeparationIsExactAgainstPathEnumeration) {
  std::mt19937_64 rng(99);
  int violated = 0, clean = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 5 + static_cast<int>(seed % 4);
    auto g = gen::random_connected(n, 0.3 + 0.05 * (seed % 5), seed);
    if (g.complete()) continue;
    std::vector<VspModel> models{build_full_model(g, default_beta(n), 1)};
    for (auto [a, b] : detail::non_adjacent_pairs(g)) {
      models.push_back(build_ab_model(g, a, b, default_beta(n)));
      break;
    }
    for (const auto& m : models)
      for (int trial = 0; trial < 10; ++trial) {
        auto x = random_point(m, rng);
        const double worst = worst_chain_violation(m, g, x);
        auto cuts = separate_chain(m, g, x, 1000);
        if (worst > kViolationTol) {
          ASSERT_FALSE(cuts.empty()) << "seed " << seed;
          EXPECT_NEAR(cuts.front().violation, worst, 1e-9);
          ++violated;
        } else {
          EXPECT_TRUE(cuts.empty()) << "seed " << seed;
          ++clean;
        }
        for (const auto& c : cuts) EXPECT_GT(c.cut.violation(x), kViolationTol);
      }
  }
  EXPECT_GT(violated, 20);
  EXPECT_GT(clean, 20);
}

TEST(AlphaPair, ReducesToSeparatorSizeOnIntegralPoints) {
  auto g = gen::cycle(6);
  auto table = alpha_table(g);
  auto m = build_full_model(g, 4, table.alpha_min());
  auto cuts = alpha_pair_inequalities(m, table, 0, 3);
  // 0 in A, 3 in B, C = {1, 4}: |C| = 2 = alpha -> tight
  auto x = *encode(m, VertexPartition{{0, 5}, {2, 3}, {1, 4}});
  EXPECT_TRUE(cuts[0].satisfied_by(x));
  std::vector<double> xd(x.begin(), x.end());
  EXPECT_NEAR(cuts[0].violation(xd), 0.0, 1e-12);
  // same sides, C of size 1 would break the bound
  auto y = *encode(m, VertexPartition{{0, 5, 4}, {2, 3}, {1}});
  EXPECT_FALSE(cuts[0].satisfied_by(y));
  EXPECT_THROW(alpha_pair_inequalities(m, table, 0, 1), InvalidArgument);
}

TEST(AlphaPair, InactiveWhenEndpointsAreNotOnTheirSides) {
  auto g = gen::cycle(6);
  auto table = alpha_table(g);
  auto m = build_full_model(g, 4, table.alpha_min());
  std::vector<double> x(static_cast<std::size_t>(m.cols()), 0.5);
  x[0] = 0.0;
  x[m.n + 3] = 0.0;
  auto cuts = alpha_pair_inequalities(m, table, 0, 3);
  // lhs is the plain column sum 5, rhs n + alpha = 8
  EXPECT_NEAR(cuts[0].violation(x), 5.0 - 8.0, 1e-12);
}

TEST(AlphaPair, UniformHalfOnCycleWithChord) {
  Graph g = gen::cycle(4);
  g.add_edge(0, 2);
  auto table = alpha_table(g);
  ASSERT_EQ(table.at(1, 3), 2);
  auto m = build_full_model(g, 2, table.alpha_min());
  std::vector<double> x(8, 0.5);
  // lhs = 4 + 2 * (0.5 + 0.5) = 6, rhs = 4 + 2
  auto cuts = alpha_pair_inequalities(m, table, 1, 3);
  EXPECT_NEAR(cuts[0].violation(x), 0.0, 1e-12);
  EXPECT_TRUE(separate_alpha_pairs(m, table, x).empty());
  x[1] = 1.0;  // x_1A
  x[1 + 4] = 0.0;
  x[3 + 4] = 1.0;  // x_3B
  x[3] = 0.0;
  auto found = separate_alpha_pairs(m, table, x, 1);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].violation, 2.0, 1e-12);
}

TEST(Subgraph, SevenCycle) {
  auto g = gen::cycle(7);
  auto m = build_full_model(g, 4, 2);
  std::vector<Vertex> all{0, 1, 2, 3, 4, 5, 6};
  auto c = subgraph_inequality(m, g, all, alpha_subgraph(g, all));
  EXPECT_EQ(c.rhs, Rational(5));
  std::vector<Vertex> small{0, 1, 2, 3};
  EXPECT_THROW(subgraph_inequality(m, g, small, 2), InvalidArgument);
  std::vector<Vertex> split{0, 1, 3, 4, 5};
  EXPECT_THROW(subgraph_inequality(m, g, split, 2), DisconnectedGraph);
}

TEST(Subgraph, CandidatesAreConnectedLargeAndCapped) {
  auto g = gen::random_connected(12, 0.3, 4);
  const int beta = default_beta(12);
  auto cands = subgraph_candidates(g, beta);
  EXPECT_LE(cands.size(), 24u);
  ASSERT_FALSE(cands.empty());
  EXPECT_EQ(cands.front().size(), 12u);
  for (const auto& vs : cands) {
    EXPECT_GT(static_cast<int>(vs.size()), beta);
    EXPECT_TRUE(g.induced(vs).connected());
  }
}

TEST(Validity, EveryFamilyHoldsOnEveryFeasiblePartition) {
  std::vector<Graph> graphs;
  for (int n = 3; n <= 6; ++n)
    for (auto& g : gen::all_connected_graphs(n))
      if (!g.complete()) graphs.push_back(g);
  for (std::uint64_t seed = 0; seed < 4; ++seed) graphs.push_back(gen::random_connected(8, 0.3, seed));
  long checked = 0;
  for (const auto& g : graphs) {
    const int n = g.n();
    const auto table = alpha_table(g);
    for (int beta : {default_beta(n), n - 1}) {
      const auto splits = oracle::feasible_splits(g, beta);
      auto full = build_full_model(g, beta, table.alpha_min());
      std::vector<LinearConstraint> family = subgraph_family(full, g, &table);
      for (auto [i, j] : table.pairs())
        for (auto& c : alpha_pair_inequalities(full, table, i, j)) family.push_back(c);
      for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j)
          if (i != j && !g.adjacent(i, j))
            for (const auto& path : oracle::simple_paths(g, i, j)) family.push_back(chain_inequality(full, g, path));
      for (auto s : splits) {
        auto x = *encode(full, oracle::to_partition(s, n));
        for (const auto& c : family) ASSERT_TRUE(c.satisfied_by(x)) << to_string(c.origin);
        checked += static_cast<long>(family.size());
      }
      // ab-fixed models: base rows plus the three families on every ab-separator
      for (auto [a, b] : table.pairs()) {
        auto m = build_ab_model(g, a, b, beta);
        std::vector<LinearConstraint> rows = m.base;
        for (auto& c : subgraph_family(m, g)) rows.push_back(c);
        for (auto [i, j] : table.pairs())
          for (auto& c : alpha_pair_inequalities(m, table, i, j)) rows.push_back(c);
        for (const auto& path : oracle::simple_paths(g, a, b)) rows.push_back(chain_inequality(m, g, path));
        for (auto s : splits) {
          if (!(s.a >> a & 1) || !(s.b >> b & 1)) continue;
          auto x = *encode(m, oracle::to_partition(s, n));
          ASSERT_TRUE(in_bounds(m, x));
          for (const auto& c : rows) ASSERT_TRUE(c.satisfied_by(x)) << to_string(c.origin);
        }
      }
    }
  }
  EXPECT_GT(checked, 100000);
}

TEST(CutPool, DeduplicatesBySignature) {
  auto g = gen::path(4);
  auto m = build_ab_model(g, 0, 3, 3);
  std::vector<Vertex> p{0, 1, 2, 3};
  CutPool pool;
  EXPECT_TRUE(pool.add(chain_inequality(m, g, p)));
  EXPECT_FALSE(pool.add(chain_inequality(m, g, p)));
  EXPECT_EQ(pool.size(), 1u);
  EXPECT_EQ(pool.count(CutOrigin::Chain), 1u);
}

TEST(Export, LpTextHasAllSections) {
  auto g = gen::cycle(5);
  auto m = build_full_model(g, 3, 2);
  std::ostringstream out;
  write_lp(out, m);
  const auto text = out.str();
  for (const char* key : {"Maximize", "Subject To", "Bounds", "Binaries", "End", "x1a", "x5b"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}
