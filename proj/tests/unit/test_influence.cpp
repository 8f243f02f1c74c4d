#include <gtest/gtest.h>

#include <random>

#include "bridge.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "rwnet/error.hpp"
#include "rwnet/influence.hpp"

namespace {

using rwnet::Index;

rwnet::ExtendedGraph ext_of(const oracle::Dense& a, bool directed, double beta = 1.0) {
  return rwnet::extend_graph(bridge::to_graph(a, directed), beta);
}

oracle::Nodes to_nodes(const std::vector<Index>& v) {
  oracle::Nodes out;
  for (Index x : v) out.push_back(static_cast<std::size_t>(x));
  return out;
}

// Two 4-leaf stars (centers 0 and 5) joined by a light edge between leaves 4 and 9.
oracle::Dense twin_stars() {
  oracle::Dense a(10, std::vector<double>(10, 0.0));
  for (std::size_t c : {0u, 5u}) {
    for (std::size_t l = c + 1; l < c + 5; ++l) a[c][l] = a[l][c] = 1.0;
  }
  a[4][9] = a[9][4] = 0.1;
  return a;
}

// Two triangles {0,1,2} and {4,5,6} joined through bridge node 3.
oracle::Dense barbell() {
  oracle::Dense a(7, std::vector<double>(7, 0.0));
  auto link = [&](std::size_t i, std::size_t j) { a[i][j] = a[j][i] = 1.0; };
  link(0, 1), link(1, 2), link(0, 2), link(4, 5), link(5, 6), link(4, 6), link(2, 3), link(3, 4);
  return a;
}

TEST(Spread, AllNodes) {
  const auto ext = ext_of(gen::cycle(6, false), false);
  const std::vector<Index> all{0, 1, 2, 3, 4, 5};
  EXPECT_NEAR(rwnet::spread(ext, all), 6.0, 1e-12);
}

TEST(Spread, StarCenterBeatsLeaf) {
  const auto a = gen::star(4);
  const auto ext = ext_of(a, false);
  const Index c[] = {0}, leaf[] = {2};
  EXPECT_GT(rwnet::spread(ext, c), rwnet::spread(ext, leaf));
  EXPECT_NEAR(rwnet::spread(ext, c), oracle::spread(a, 1.0, {0}), 1e-10);
  EXPECT_NEAR(rwnet::spread(ext, leaf), oracle::spread(a, 1.0, {2}), 1e-10);
}

TEST(Spread, DisconnectedCliquesAdd) {
  oracle::Dense a(8, std::vector<double>(8, 0.0));
  for (std::size_t base : {0u, 4u}) {
    for (std::size_t i = base; i < base + 4; ++i) {
      for (std::size_t j = base; j < base + 4; ++j) a[i][j] = i == j ? 0.0 : 1.0;
    }
  }
  const auto ext = ext_of(a, false);
  const Index x[] = {1}, y[] = {6}, both[] = {1, 6};
  EXPECT_NEAR(rwnet::spread(ext, both), rwnet::spread(ext, x) + rwnet::spread(ext, y), 1e-10);
}

TEST(Spread, MatchesOracleAndIsMonotone) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const bool dir = rep % 2 == 0;
    const auto a = gen::strongly_connected(12, rng, {dir, true, 0.2});
    const double beta = 0.5 + rep;
    const auto ext = ext_of(a, dir, beta);
    const std::vector<Index> s{2, 7};
    const double base = rwnet::spread(ext, s);
    EXPECT_NEAR(base, oracle::spread(a, beta, {2, 7}), 1e-9);
    EXPECT_GE(base, 2.0);
    EXPECT_LE(base, 12.0);
    for (Index t = 0; t < 12; ++t) {
      std::vector<Index> more = s;
      more.push_back(t);
      EXPECT_GE(rwnet::spread(ext, more), base - 1e-12);
    }
  }
}

TEST(Spread, RejectsExogenousSeed) {
  const auto ext = ext_of(gen::cycle(4, true), true);
  const Index o[] = {4};
  EXPECT_THROW(rwnet::spread(ext, o), rwnet::ValidationError);
  EXPECT_THROW(rwnet::spread(ext, {}), rwnet::ValidationError);
}

TEST(MostInfluential, StarCycleBarbell) {
  EXPECT_EQ(rwnet::most_influential(ext_of(gen::star(4), false)), 0);
  EXPECT_EQ(rwnet::most_influential(ext_of(gen::cycle(5, false), false)), 0);
  const auto bb = barbell();
  EXPECT_EQ(static_cast<std::size_t>(rwnet::most_influential(ext_of(bb, false))),
            oracle::best_subset_spread(bb, 1.0, 1).seeds[0]);
}

TEST(MostInfluential, EqualsBruteForceArgmax) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 8; ++rep) {
    const bool dir = rep % 2 == 0;
    const auto a = gen::strongly_connected(6 + 3 * static_cast<std::size_t>(rep), rng, {dir, true, 0.2});
    EXPECT_EQ(static_cast<std::size_t>(rwnet::most_influential(ext_of(a, dir))),
              oracle::best_subset_spread(a, 1.0, 1).seeds[0]);
  }
}

TEST(C2Greedy, KOneIsMostInfluential) {
  std::mt19937_64 rng(9);
  const auto ext = ext_of(gen::strongly_connected(15, rng, {true, true, 0.2}), true);
  const auto sel = rwnet::c2greedy(ext, 1);
  ASSERT_EQ(sel.seeds.size(), 1u);
  EXPECT_EQ(sel.seeds[0], rwnet::most_influential(ext));
}

TEST(C2Greedy, KEqualsNSelectsEveryone) {
  const auto sel = rwnet::c2greedy(ext_of(gen::star(4), false), 5);
  EXPECT_EQ(sel.seeds.size(), 5u);
  EXPECT_NEAR(sel.spread, 5.0, 1e-10);
  EXPECT_LE((sel.adoption.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(C2Greedy, TwinStarsPicksCenters) {
  const auto a = twin_stars();
  const auto sel = rwnet::c2greedy(ext_of(a, false), 2);
  std::vector<Index> got = sel.seeds;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<Index>{0, 5}));
  EXPECT_EQ(oracle::best_subset_spread(a, 1.0, 2).seeds, (oracle::Nodes{0, 5}));
}

TEST(C2Greedy, TraceIsConsistent) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 4; ++rep) {
    const bool dir = rep % 2 == 0;
    const auto a = gen::strongly_connected(14, rng, {dir, true, 0.2});
    const auto ext = ext_of(a, dir);
    const auto sel = rwnet::c2greedy(ext, 5);
    double prev = 0.0;
    for (std::size_t i = 0; i < sel.seeds.size(); ++i) {
      std::vector<Index> prefix(sel.seeds.begin(), sel.seeds.begin() + static_cast<std::ptrdiff_t>(i + 1));
      const double s = oracle::spread(a, 1.0, to_nodes(prefix));
      EXPECT_NEAR(sel.spread_curve[i], s, 1e-9);
      EXPECT_NEAR(sel.marginal_gains[i], s - prev, 1e-9);
      if (i > 0) EXPECT_LE(sel.marginal_gains[i], sel.marginal_gains[i - 1] + 1e-9);
      prev = s;
      // Greedy pick is the best extension of the previous prefix.
      std::vector<Index> before(sel.seeds.begin(), sel.seeds.begin() + static_cast<std::ptrdiff_t>(i));
      for (Index t = 0; t < 14; ++t) {
        if (std::find(before.begin(), before.end(), t) != before.end()) continue;
        auto alt = before;
        alt.push_back(t);
        EXPECT_LE(oracle::spread(a, 1.0, to_nodes(alt)), s + 1e-9);
      }
    }
    EXPECT_NEAR(sel.spread, sel.spread_curve.back(), 1e-12);
  }
}

TEST(C2Greedy, NearOptimal) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 6; ++rep) {
    const auto a = gen::strongly_connected(9, rng, {rep % 2 == 0, true, 0.2});
    for (Index k = 1; k <= 3; ++k) {
      const auto sel = rwnet::c2greedy(ext_of(a, rep % 2 == 0), k);
      const auto best = oracle::best_subset_spread(a, 1.0, static_cast<std::size_t>(k));
      EXPECT_GE(sel.spread, (1.0 - 1.0 / std::exp(1.0)) * best.spread);
    }
  }
}

TEST(C2Greedy, RejectsBadK) {
  const auto ext = ext_of(gen::star(3), false);
  EXPECT_THROW(rwnet::c2greedy(ext, 0), rwnet::ValidationError);
  EXPECT_THROW(rwnet::c2greedy(ext, 5), rwnet::ValidationError);
}

TEST(Baselines, StarDegreeIsCenter) {
  EXPECT_EQ(rwnet::baseline_rankers(bridge::to_graph(gen::star(5), false), 1, rwnet::RankMethod::Degree),
            (std::vector<Index>{0}));
}

TEST(Baselines, CycleTieBreaksToZero) {
  const auto g = bridge::to_graph(gen::cycle(7, false), false);
  for (auto m : {rwnet::RankMethod::Degree, rwnet::RankMethod::Closeness, rwnet::RankMethod::PageRank}) {
    EXPECT_EQ(rwnet::baseline_rankers(g, 1, m), (std::vector<Index>{0})) << rwnet::to_string(m);
  }
}

TEST(Baselines, RandomIsSeeded) {
  const auto g = bridge::to_graph(gen::cycle(20, false), false);
  rwnet::RankerOptions o1, o2;
  o1.seed = o2.seed = 1234;
  const auto a = rwnet::baseline_rankers(g, 5, rwnet::RankMethod::Random, o1);
  EXPECT_EQ(a, rwnet::baseline_rankers(g, 5, rwnet::RankMethod::Random, o2));
  o2.seed = 99;
  EXPECT_NE(a, rwnet::baseline_rankers(g, 5, rwnet::RankMethod::Random, o2));
}

TEST(Baselines, PagerankSumsToOne) {
  std::mt19937_64 rng(3);
  const auto pr = rwnet::pagerank(bridge::to_graph(gen::random_digraph(20, 0.1, rng), true));
  EXPECT_NEAR(pr.sum(), 1.0, 1e-9);
  EXPECT_GT(pr.minCoeff(), 0.0);
}

TEST(Baselines, ParseMethod) {
  EXPECT_EQ(rwnet::parse_rank_method("pagerank"), rwnet::RankMethod::PageRank);
  EXPECT_THROW(rwnet::parse_rank_method("hubs"), rwnet::ValidationError);
}

TEST(TopK, TieRule) {
  rwnet::Vector v(4);
  v << 1.0, 2.0, 2.0 * (1 + 1e-12), 0.5;
  EXPECT_EQ(rwnet::top_k(v, 2), (std::vector<Index>{1, 2}));
}

}  // namespace
