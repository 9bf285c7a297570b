#include <gtest/gtest.h>

#include <bit>
#include <numeric>

#include "rspan/expanders.hpp"

using namespace rspan;

namespace {

/// Literal reading of both properties: every X on either side with
/// |X| >= xi|side| has |N(X)| > (1-xi)|other|. Enumerates all subsets.
bool literal_expansion(const WeightedGraph& g, std::size_t left, const Ratio& xi, bool left_only = false) {
  const std::size_t n = g.n(), right = n - left;
  for (int side = 0; side < (left_only ? 1 : 2); ++side) {
    std::size_t lo = side == 0 ? 0 : left, s = side == 0 ? left : right, other = n - s;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
      auto k = static_cast<std::int64_t>(std::popcount(mask));
      if (k * xi.den < xi.num * static_cast<std::int64_t>(s)) continue;
      std::vector<char> hit(n, 0);
      std::size_t size = 0;
      for (std::size_t i = 0; i < s; ++i)
        if (mask >> i & 1)
          for (Vertex v : g.neighbors(static_cast<Vertex>(lo + i)))
            if (!hit[v]) {
              hit[v] = 1;
              ++size;
            }
      if (static_cast<std::int64_t>(size) * xi.den <= (xi.den - xi.num) * static_cast<std::int64_t>(other)) return false;
    }
  }
  return true;
}

WeightedGraph matching(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < k; ++i) e.push_back({i, static_cast<Vertex>(i + k), 1.0});
  return WeightedGraph::from_edges(2 * k, e);
}

std::size_t component_oracle(const WeightedGraph& g, const std::vector<char>& dead) {
  std::vector<Vertex> parent(g.n());
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto e : g.edges())
    if (!dead[e.u] && !dead[e.v]) parent[find(e.u)] = find(e.v);
  std::vector<std::size_t> count(g.n(), 0);
  std::size_t best = 0;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!dead[v]) best = std::max(best, ++count[find(v)]);
  return best;
}

}  // namespace

TEST(Bipartite, SingleEdgeWhenBothSidesAreSingletons) {
  for (auto xi : {Ratio(1, 2), Ratio(1, 16)}) {
    auto b = build_bipartite_expander(1, 1, xi, 3);
    EXPECT_EQ(b.graph.num_edges(), 1u);
    EXPECT_TRUE(b.graph.has_edge(0, 1));
  }
}

TEST(Bipartite, DegreeFormula) {
  EXPECT_EQ(bipartite_constant(Ratio(1, 4)), 48);
  EXPECT_EQ(bipartite_constant(Ratio(1, 16)), 768);
  EXPECT_EQ(bipartite_constant(Ratio(1, 2)), 12);
  auto d = bipartite_degrees(12, 12, 48);
  EXPECT_EQ(d.per_left, 96u);
  EXPECT_EQ(d.per_right, 96u);
  EXPECT_EQ(bipartite_edge_budget(12, 12, 48), 2304u);
  auto b = build_bipartite_expander(12, 12, Ratio(1, 4), 9);
  EXPECT_LE(b.graph.num_edges(), 2304u);
  EXPECT_EQ(bipartite_degrees(3, 9, 5).per_left, 20u);
  EXPECT_EQ(bipartite_degrees(3, 9, 5).per_right, 10u);
}

TEST(Bipartite, NoEdgesInsideASide) {
  auto b = build_bipartite_expander(17, 40, Ratio(1, 3), 1, 2);
  for (auto e : b.graph.edges()) EXPECT_TRUE(e.u < 17 && e.v >= 17);
  EXPECT_TRUE(b.experimental);
}

TEST(Bipartite, DegreeNeverExceedsSampleBudget) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto b = build_bipartite_expander(30, 70, Ratio(1, 2), seed, 1);
    for (Vertex u = 0; u < 100; ++u) EXPECT_LE(b.graph.degree(u), u < 30 ? 70u : 30u);
    EXPECT_LE(b.graph.num_edges(), bipartite_edge_budget(30, 70, 1));
  }
}

TEST(Bipartite, DeterministicPerSeed) {
  auto a = build_bipartite_expander(20, 25, Ratio(1, 3), 77, 2);
  auto b = build_bipartite_expander(20, 25, Ratio(1, 3), 77, 2);
  auto c = build_bipartite_expander(20, 25, Ratio(1, 3), 78, 2);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_NE(a.graph, c.graph);
}

TEST(Bipartite, HalfXiExpansionOnTwelveByTwelve) {
  auto b = build_bipartite_expander(12, 12, Ratio(1, 2), 5);
  // every X in L with |X| >= 6 has |N(X)| > 6
  for (std::uint32_t mask = 1; mask < (1u << 12); ++mask) {
    if (std::popcount(mask) < 6) continue;
    std::vector<char> hit(24, 0);
    int size = 0;
    for (Vertex i = 0; i < 12; ++i)
      if (mask >> i & 1)
        for (Vertex v : b.graph.neighbors(i)) {
          size += !hit[v];
          hit[v] = 1;
        }
    ASSERT_GT(size, 6) << mask;
  }
}

TEST(VerifyBipartite, CompleteGraphPasses) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < 5; ++u)
    for (Vertex v = 5; v < 12; ++v) e.push_back({u, v, 1.0});
  auto g = WeightedGraph::from_edges(12, e);
  for (auto xi : {Ratio(1, 10), Ratio(1, 2), Ratio(9, 10)}) EXPECT_TRUE(verify_expansion_bruteforce(g, 5, xi).pass);
}

TEST(VerifyBipartite, MatchingFailsWithSizeTwoWitness) {
  auto r = verify_expansion_bruteforce(matching(8), 8, Ratio(1, 4));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.violating.size(), 2u);
  EXPECT_EQ(r.neighborhood, 2u);
}

TEST(VerifyBipartite, BuiltExpanderPassesWithRecordedSeed) {
  VerifyPolicy p;
  p.mode = VerifyPolicy::Mode::exhaustive;
  auto b = build_bipartite_expander(12, 12, Ratio(1, 4), 2024, std::nullopt, p);
  ASSERT_TRUE(b.verification);
  EXPECT_TRUE(b.verification->pass);
  EXPECT_TRUE(verify_expansion_bruteforce(build_bipartite_expander(12, 12, Ratio(1, 4), b.seed).graph, 12, Ratio(1, 4)).pass);
}

TEST(VerifyBipartite, AgreesWithLiteralEnumeration) {
  int fails = 0, passes = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t left = 3 + seed % 8, right = 4 + (seed * 7) % 9;
    Ratio xi = seed % 3 == 0 ? Ratio(1, 4) : seed % 3 == 1 ? Ratio(1, 3) : Ratio(1, 2);
    auto g = build_bipartite_expander(left, right, xi, seed, 1).graph;
    bool want = literal_expansion(g, left, xi);
    auto got = verify_expansion_bruteforce(g, left, xi);
    EXPECT_EQ(got.pass, want) << "seed " << seed;
    (want ? passes : fails)++;
    if (!got.pass) {
      // the witness really violates its side
      std::vector<char> hit(g.n(), 0);
      std::size_t size = 0;
      for (Vertex x : got.violating)
        for (Vertex v : g.neighbors(x)) {
          size += !hit[v];
          hit[v] = 1;
        }
      EXPECT_EQ(size, got.neighborhood);
    }
  }
  EXPECT_GT(fails, 0);
  EXPECT_GT(passes, 0);
}

TEST(VerifyBipartite, LargeSideIsDecidedThroughTheSmallSide) {
  // one side beyond the budget: only the small side is enumerated
  auto g = build_bipartite_expander(10, 40, Ratio(1, 2), 4, 2).graph;
  auto r = verify_expansion_bruteforce(g, 10, Ratio(1, 2));
  EXPECT_EQ(r.pass, literal_expansion(g, 10, Ratio(1, 2), true));
  if (r.pass) {
    EXPECT_TRUE(verify_expansion_sampled(g, 10, Ratio(1, 2), 2000, 3).pass);
  }
  EXPECT_THROW(verify_expansion_bruteforce(build_bipartite_expander(30, 30, Ratio(1, 2), 1, 1).graph, 30, Ratio(1, 2)),
               Error);
}

TEST(VerifyBipartite, MonotoneInXi) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = build_bipartite_expander(9, 11, Ratio(1, 3), seed, 1).graph;
    bool prev = false;
    for (int k = 1; k < 10; ++k) {
      bool now = verify_expansion_bruteforce(g, 9, Ratio(k, 10)).pass;
      if (prev) {
        EXPECT_TRUE(now) << "seed " << seed << " xi " << k << "/10";
      }
      prev = now;
    }
  }
}

TEST(VerifyBipartite, SampledCheckFindsAMatchingViolation) {
  auto r = verify_expansion_sampled(matching(50), 50, Ratio(1, 4), 10, 1);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.exhaustive);
}

TEST(Strong, TwoVerticesGiveOneEdge) {
  auto b = build_strong_expander(2, 2, Ratio(1, 2), 0);
  EXPECT_EQ(b.graph.num_edges(), 1u);
  EXPECT_THROW(build_strong_expander(1, 2, Ratio(1, 2), 0), Error);
}

TEST(Strong, SixteenVerticesVerifyExhaustively) {
  VerifyPolicy p;
  p.mode = VerifyPolicy::Mode::exhaustive;
  auto b = build_strong_expander(16, 2, Ratio(1, 2), 11, std::nullopt, p);
  ASSERT_TRUE(b.verification);
  EXPECT_TRUE(b.verification->pass);
  EXPECT_GE(b.attempts, 1u);
  EXPECT_EQ(b.verification->subsets_checked, (1u << 16) - 1);
  EXPECT_EQ(strong_constant(2, Ratio(1, 2)), 256);
  EXPECT_LE(b.graph.num_edges(), 256u * 16u);
}

TEST(Strong, VerifierAgreesWithDirectSubsetScan) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = build_strong_expander(12, 3, Ratio(1, 4), seed, 2).graph;
    auto r = verify_strong_expansion(g, 3, Ratio(1, 4));
    std::size_t smallest = 100;
    for (std::uint32_t x = 1; x < (1u << 12); ++x) {
      std::uint32_t nb = 0;
      for (Vertex u = 0; u < 12; ++u)
        if (x >> u & 1)
          for (Vertex v : g.neighbors(u)) nb |= 1u << v;
      int size = std::popcount(nb), xs = std::popcount(x);
      if (size < 3 * xs && 4 * size < 3 * 12) smallest = std::min<std::size_t>(smallest, xs);
    }
    EXPECT_EQ(r.pass, smallest == 100) << seed;
    if (!r.pass) {
      EXPECT_EQ(r.violating.size(), smallest);
    }
  }
}

TEST(Strong, ResamplesUntilVerificationPasses) {
  VerifyPolicy p;
  p.mode = VerifyPolicy::Mode::exhaustive;
  p.max_attempts = 50;
  auto b = build_strong_expander(10, 2, Ratio(1, 3), 0, 2, p);
  ASSERT_TRUE(b.verification);
  if (b.verification->pass) {
    EXPECT_EQ(b.seed, b.attempts - 1);
    EXPECT_TRUE(verify_strong_expansion(build_strong_expander(10, 2, Ratio(1, 3), b.seed, 2).graph, 2, Ratio(1, 3)).pass);
  }
}

TEST(Reliable, ParametersAndEmptyFailureSet) {
  auto p = reliable_params(Ratio(2, 5));
  EXPECT_EQ(p.alpha, 250);
  EXPECT_EQ(p.beta, Ratio(1, 625));
  EXPECT_THROW(reliable_params(Ratio(1, 2)), Error);
  auto b = build_reliable_connectivity(200, Ratio(2, 5), 3);
  std::vector<char> none(200, 0);
  EXPECT_EQ(largest_component(b.graph, none), 200u);
  EXPECT_LE(b.graph.num_edges(), static_cast<std::uint64_t>(strong_constant(p.alpha, p.beta)) * 200u);
}

TEST(Reliable, LargestComponentSurvivesRandomFailures) {
  auto g = build_reliable_connectivity(200, Ratio(2, 5), 8).graph;
  CounterRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<char> dead(200, 0);
    for (int placed = 0; placed < 20;) {
      auto v = rng.below(200);
      if (!dead[v]) dead[v] = 1, ++placed;
    }
    ASSERT_GE(largest_component(g, dead), 172u);
  }
}

TEST(Reliable, ComponentSearchMatchesUnionFind) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = build_strong_expander(60, 2, Ratio(1, 2), seed, 1).graph;
    CounterRng rng(seed);
    std::vector<char> dead(60, 0);
    for (auto& d : dead) d = rng.below(3) == 0;
    EXPECT_EQ(largest_component(g, dead), component_oracle(g, dead));
  }
}
