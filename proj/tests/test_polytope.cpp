#include <gtest/gtest.h>

#include <random>
#include <set>

#include "vsp/generators.hpp"
#include "vsp/polytope.hpp"

using namespace vsp;
using namespace vsp::lab;

namespace {

long naive_count(const Graph& g, Vertex a, Vertex b, int beta) {
  std::vector<Vertex> free;
  for (Vertex v = 0; v < g.n(); ++v)
    if (v != a && v != b) free.push_back(v);
  long total = 1;
  for (std::size_t k = 0; k < free.size(); ++k) total *= 3;
  long count = 0;
  for (long code = 0; code < total; ++code) {
    VertexPartition p{{a}, {b}, {}};
    long rest = code;
    for (Vertex v : free) {
      const int s = static_cast<int>(rest % 3);
      rest /= 3;
      (s == 0 ? p.A : s == 1 ? p.B : p.C).push_back(v);
    }
    if (validate_partition(g, p, beta).feasible()) ++count;
  }
  return count;
}

bool two_colorable_between(const Graph& g, const EdgeIncidence& chi, const VertexPartition& p) {
  const auto sides = p.sides(g.n());
  for (std::size_t k = 0; k < chi.size(); ++k) {
    if (chi.value[k] < 0.5) continue;
    auto [u, v] = chi.edges[k];
    if ((sides[u] == Side::C) == (sides[v] == Side::C)) return false;
  }
  return true;
}

// Explicit odd-subset enumeration over one walk.
double worst_by_enumeration(const std::vector<int>& edges, const std::vector<double>& chi) {
  double worst = -1e9;
  for (std::uint32_t mask = 1; mask < (1u << edges.size()); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    double lhs = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) lhs += (mask >> k & 1) ? chi[edges[k]] : -chi[edges[k]];
    worst = std::max(worst, lhs - (std::popcount(mask) - 1));
  }
  return worst;
}

}  // namespace

TEST(Enumerate, PathOfThreeHasOnlyTheOrigin) {
  auto ps = enumerate_ab_separators(gen::path(3), 0, 2, 2);
  ASSERT_EQ(ps.points.size(), 1u);
  EXPECT_EQ(ps.points[0], (IncidenceVector{0, 0}));
  EXPECT_EQ(affine_dimension(ps), 0);
}

TEST(Enumerate, FourPathWithBetaTwo) {
  auto ps = enumerate_ab_separators(gen::path(4), 0, 3, 2);
  std::set<IncidenceVector> got(ps.points.begin(), ps.points.end());
  std::set<IncidenceVector> want{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(ps.partition(0).A.front(), 0);
}

TEST(Enumerate, MatchesTernaryCount) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 6);
    auto g = gen::random_connected(n, 0.25 + 0.05 * (seed % 5), seed);
    for (auto [a, b] : vsp::detail::non_adjacent_pairs(g))
      for (int beta : {default_beta(n), n - 1, 2}) {
        auto ps = enumerate_ab_separators(g, a, b, beta);
        EXPECT_EQ(static_cast<long>(ps.points.size()), naive_count(g, a, b, beta));
        std::set<IncidenceVector> unique(ps.points.begin(), ps.points.end());
        EXPECT_EQ(unique.size(), ps.points.size());
        for (std::size_t k = 0; k < ps.points.size(); ++k) EXPECT_TRUE(validate_partition(g, ps.partition(k), beta).feasible());
      }
  }
}

TEST(Enumerate, Guards) {
  EXPECT_THROW(enumerate_ab_separators(gen::path(15), 0, 14, 10), GuardExceeded);
  EXPECT_THROW(enumerate_ab_separators(gen::path(4), 0, 1, 2), InvalidArgument);
  EXPECT_THROW(enumerate_ab_separators(gen::path(4), 2, 2, 2), InvalidArgument);
}

TEST(AffineDimension, SmallSets) {
  std::vector<IncidenceVector> single{{1, 0, 1}};
  EXPECT_EQ(affine_dimension(single), 0);
  std::vector<IncidenceVector> triangle{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_EQ(affine_dimension(triangle), 2);
  std::vector<IncidenceVector> collinear{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  EXPECT_EQ(affine_dimension(collinear), 1);
  std::vector<IncidenceVector> none;
  EXPECT_THROW(affine_dimension(none), InvalidArgument);
}

TEST(AffineDimension, IntegerRankAgreesWithKnownMatrices) {
  std::vector<std::vector<long long>> m{{2, 4, 6}, {1, 2, 3}, {0, 1, 1}, {1, 3, 4}};
  EXPECT_EQ(integer_rank(m), 2);
  std::vector<std::vector<long long>> id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(integer_rank(id), 3);
}

TEST(AffineDimension, ClosedFormOnAllSmallGraphs) {
  long cases = 0;
  for (int n = 3; n <= 6; ++n)
    for (const auto& g : gen::all_connected_graphs(n))
      for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b) {
          if (a == b || g.adjacent(a, b)) continue;
          auto ps = enumerate_ab_separators(g, a, b, default_beta(n));
          ASSERT_FALSE(ps.points.empty());
          EXPECT_EQ(affine_dimension(ps), predicted_dimension(g, a, b));
          ++cases;
        }
  EXPECT_GT(cases, 500);
}

TEST(AffineDimension, InvariantUnderRelabelingAndPointOrder) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = gen::random_connected(8, 0.35, seed);
    auto pairs = vsp::detail::non_adjacent_pairs(g);
    auto [a, b] = pairs[seed % pairs.size()];
    auto ps = enumerate_ab_separators(g, a, b, 5);
    const int dim = affine_dimension(ps);
    auto shuffled = ps.points;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(seed));
    EXPECT_EQ(affine_dimension(shuffled), dim);
    auto perm = gen::random_permutation(8, seed + 1);
    auto h = g.permuted(perm);
    EXPECT_EQ(affine_dimension(enumerate_ab_separators(h, perm[a], perm[b], 5)), dim);
  }
}

TEST(VertexToEdge, PathOfThree) {
  auto g = gen::path(3);
  auto chi = vertex_to_edge(g, {{0}, {2}, {1}});
  ASSERT_EQ(chi.size(), 2u);
  EXPECT_EQ(chi.value, (std::vector<double>{1, 1}));
  std::multiset<EdgeLabel> labels(chi.label.begin(), chi.label.end());
  EXPECT_EQ(labels, (std::multiset<EdgeLabel>{EdgeLabel::AC, EdgeLabel::BC}));
  EXPECT_THROW(vertex_to_edge(g, {{0, 1}, {2}, {}}), InvalidArgument);
}

TEST(VertexToEdge, EdgesInsideSeparatorAreZero) {
  auto g = gen::path(6);
  auto chi = vertex_to_edge(g, {{0}, {5}, {1, 2, 3, 4}});
  EXPECT_EQ(chi.value, (std::vector<double>{1, 0, 0, 0, 1}));
  EXPECT_EQ(chi.label.front(), EdgeLabel::AC);
  EXPECT_EQ(chi.label.back(), EdgeLabel::BC);
}

TEST(EdgeSystem, TrivialVectors) {
  auto g = gen::cycle(6);
  auto ones = make_incidence(g, std::vector<double>(6, 1.0));
  auto r1 = check_edge_system(g, 0, 3, ones);
  EXPECT_EQ(r1.chains, 2);
  EXPECT_EQ(r1.cycles, 1);
  EXPECT_TRUE(r1.holds(EdgeFamily::ChainCrossing));
  auto zeros = make_incidence(g, std::vector<double>(6, 0.0));
  auto r0 = check_edge_system(g, 0, 3, zeros);
  EXPECT_EQ(r0.violated[0], 2);
  EXPECT_FALSE(r0.violations.empty());
  EXPECT_THROW(check_edge_system(gen::path(11), 0, 10, make_incidence(gen::path(11), std::vector<double>(10, 0))), GuardExceeded);
}

TEST(EdgeSystem, CyclesAreListedOnce) {
  EXPECT_EQ(simple_cycles(gen::cycle(5)).size(), 1u);
  EXPECT_EQ(simple_cycles(gen::complete(4)).size(), 7u);
  EXPECT_EQ(simple_cycles(gen::complete(5)).size(), 37u);
  EXPECT_TRUE(simple_cycles(gen::path(5)).empty());
}

TEST(EdgeSystem, OddSubsetSeparationIsExact) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + trial % 9;
    std::vector<int> edges(len);
    std::iota(edges.begin(), edges.end(), 0);
    std::vector<double> chi(len);
    for (auto& x : chi) x = trial % 3 == 0 ? std::round(u(rng)) : u(rng);
    auto [amount, subset] = lab::detail::worst_odd_subset(edges, chi);
    EXPECT_NEAR(amount, worst_by_enumeration(edges, chi), 1e-9);
    EXPECT_EQ(subset.size() % 2, 1u);
  }
}

TEST(EdgeSystem, ImagesOfSeparatorsSatisfyTheSystem) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 5 + static_cast<int>(seed % 4);
    auto g = gen::random_connected(n, 0.4, seed);
    for (auto [a, b] : vsp::detail::non_adjacent_pairs(g)) {
      auto ps = enumerate_ab_separators(g, a, b, default_beta(n));
      for (std::size_t k = 0; k < ps.points.size(); ++k) {
        auto p = ps.partition(k);
        auto chi = vertex_to_edge(g, p);
        EXPECT_TRUE(two_colorable_between(g, chi, p));
        ASSERT_TRUE(check_edge_system(g, a, b, chi).holds());
      }
    }
  }
}

TEST(Correspondence, CutSpaceCoversEveryIntegralSystemPoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 5 + static_cast<int>(seed % 3);
    auto g = gen::random_connected(n, 0.3, seed + 20);
    if (g.edge_count() > 12) continue;
    auto [a, b] = vsp::detail::non_adjacent_pairs(g).front();
    std::set<std::vector<int>> brute, via_cuts;
    const std::size_t e = g.edge_count();
    for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
      std::vector<double> x(e);
      for (std::size_t k = 0; k < e; ++k) x[k] = mask >> k & 1;
      auto chi = make_incidence(g, x);
      if (check_edge_system(g, a, b, chi).holds()) brute.insert(chi.integral());
    }
    for (const auto& c : cut_vectors(g, a)) {
      std::vector<double> x(c.begin(), c.end());
      if (check_edge_system(g, a, b, make_incidence(g, x)).holds()) via_cuts.insert(c);
    }
    EXPECT_EQ(brute, via_cuts) << "seed " << seed;
  }
}

TEST(Correspondence, NoUnexplainedPointsOnSmallGraphs) {
  for (int n = 3; n <= 5; ++n)
    for (const auto& g : gen::all_connected_graphs(n))
      for (auto [a, b] : vsp::detail::non_adjacent_pairs(g)) {
        auto r = edge_correspondence(g, a, b, default_beta(n));
        EXPECT_EQ(r.images_failing, 0);
        EXPECT_EQ(r.unexplained, 0);
        EXPECT_EQ(r.matched, r.images);
        EXPECT_EQ(r.system_points, r.matched + r.beta_explained);
      }
  // C = {1, 2} on C6 leaves B = {3, 4, 5}, too large for beta = 2
  auto r = edge_correspondence(gen::cycle(6), 0, 3, 2);
  EXPECT_GT(r.beta_explained, 0);
  EXPECT_EQ(r.unexplained, 0);
}

TEST(FractionalVertices, FoundPointsSatisfyTheRelaxedSystem) {
  auto g = gen::complete_bipartite(3, 3);
  auto found = fractional_vertices(g, 0, 1, 60, 4);
  for (const auto& x : found) {
    auto chi = make_incidence(g, x);
    EXPECT_TRUE(check_edge_system(g, 0, 1, chi).holds());
    for (double v : x) {
      EXPECT_GE(v, -1e-9);
      EXPECT_LE(v, 1 + 1e-9);
    }
  }
}

TEST(ModelCuts, HoldOnEnumeratedSeparators) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto g = gen::random_connected(7, 0.35, seed);
    const auto table = alpha_table(g);
    for (auto [a, b] : table.pairs()) {
      auto r = check_model_cuts(g, a, b, default_beta(7), table);
      EXPECT_EQ(r.violations, 0) << r.first_failure;
      if (r.points > 0) {
        EXPECT_GT(r.per_family[CutOrigin::Chain], 0);
      }
    }
  }
}
