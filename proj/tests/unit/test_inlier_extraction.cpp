// Copyright 2026 The cliqueloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/inlier_extraction.hpp"
#include "cliqueloc/parallel.hpp"
#include "cliqueloc/random.hpp"
#include "oracles.hpp"

using namespace cliqueloc;

namespace {

CompatibilityGraph from_adjacency(const oracle::Adjacency& a) {
  CompatibilityGraph g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i][j]) g.connect(i, j);
  return g;
}

std::set<std::vector<int>> member_sets(const CliqueEnumeration& e) {
  std::set<std::vector<int>> out;
  for (const auto& c : e.cliques) out.insert(c.members);
  return out;
}

ObjectMap map_at(const std::vector<Eigen::Vector3d>& pos) {
  ObjectMap m;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    EllipsoidLandmark lm;
    lm.id = static_cast<std::int64_t>(i);
    lm.position = pos[i];
    m.landmarks.push_back(lm);
  }
  return m;
}

ObservationSet obs_at(const std::vector<Eigen::Vector3d>& pos) {
  ObservationSet o;
  o.objects = map_at(pos).landmarks;
  return o;
}

}  // namespace

TEST(Compatibility, DistanceExample) {
  const ObjectMap map = map_at({{0, 0, 0}, {2.0, 0, 0}});
  const ObservationSet obs = obs_at({{0, 0, 0}, {0, 1.85, 0}});
  const std::vector<Correspondence> c{{0, 0, 1}, {1, 1, 1}};
  const CompatibilityGraph g = build_compatibility(c, map, obs, 0.3);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_FALSE(g.adjacent(0, 0));
  EXPECT_FALSE(build_compatibility(c, map, obs, 0.1).adjacent(0, 1));
}

TEST(Compatibility, SharedIndexNeverCompatible) {
  const ObjectMap map = map_at({{0, 0, 0}, {0.01, 0, 0}});
  const ObservationSet obs = obs_at({{0, 0, 0}, {0.01, 0, 0}});
  const std::vector<Correspondence> c{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}};
  const CompatibilityGraph g = build_compatibility(c, map, obs, 0.3);
  EXPECT_FALSE(g.adjacent(0, 1));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(MaximalCliques, Triangle) {
  const oracle::Adjacency a{{false, true, true}, {true, false, true}, {true, true, false}};
  const std::vector<double> w(3, 1.0);
  const auto e = enumerate_maximal_cliques(from_adjacency(a), w);
  ASSERT_EQ(e.cliques.size(), 1u);
  EXPECT_EQ(e.cliques[0].members, (std::vector<int>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(e.cliques[0].score, 3.0);
}

TEST(MaximalCliques, Path) {
  const oracle::Adjacency a{{false, true, false}, {true, false, true}, {false, true, false}};
  const std::vector<double> w(3, 1.0);
  EXPECT_EQ(member_sets(enumerate_maximal_cliques(from_adjacency(a), w)),
            (std::set<std::vector<int>>{{0, 1}, {1, 2}}));
}

TEST(MaximalCliques, EmptyGraph) {
  EXPECT_TRUE(enumerate_maximal_cliques(CompatibilityGraph(0), std::span<const double>{}).cliques.empty());
}

TEST(MaximalCliques, IsolatedVerticesAreSingletons) {
  const std::vector<double> w(3, 0.5);
  EXPECT_EQ(enumerate_maximal_cliques(CompatibilityGraph(3), w).cliques.size(), 3u);
}

TEST(MaximalCliques, MatchesBruteForce) {
  Rng rng(21);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto a = oracle::random_graph(rng, n, density(rng));
    const std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    EXPECT_EQ(member_sets(enumerate_maximal_cliques(from_adjacency(a), w)), oracle::brute_force_maximal_cliques(a));
  }
}

TEST(MaximalCliques, RankedByScoreThenSizeThenMembers) {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 10;
    const auto a = oracle::random_graph(rng, n, 0.5);
    std::vector<double> w;
    for (int i = 0; i < n; ++i) w.push_back(std::uniform_int_distribution<int>(1, 3)(rng));
    const auto e = enumerate_maximal_cliques(from_adjacency(a), w);
    for (std::size_t i = 0; i + 1 < e.cliques.size(); ++i) {
      EXPECT_FALSE(ranks_before(e.cliques[i + 1], e.cliques[i]));
    }
    for (const auto& c : e.cliques) {
      double s = 0;
      for (int m : c.members) s += w[static_cast<std::size_t>(m)];
      EXPECT_DOUBLE_EQ(c.score, s);
    }
  }
}

TEST(MaximalCliques, EqualScoreLargerFirst) {
  const CliqueHypothesis small{{0, 1}, 2.0}, large{{2, 3, 4}, 2.0};
  EXPECT_TRUE(ranks_before(large, small));
  EXPECT_FALSE(ranks_before(small, large));
  const CliqueHypothesis a{{0, 2, 5}, 2.0}, b{{0, 3, 4}, 2.0};
  EXPECT_TRUE(ranks_before(a, b));
}

TEST(MaximalCliques, TruncationIsFlaggedAndDeterministic) {
  Rng rng(23);
  const auto a = oracle::random_graph(rng, 14, 0.5);
  const auto g = from_adjacency(a);
  const std::vector<double> w(14, 1.0);
  const auto full = enumerate_maximal_cliques(g, w);
  ASSERT_GT(full.cliques.size(), 5u);
  EXPECT_FALSE(full.limit_exceeded);
  const auto cut = enumerate_maximal_cliques(g, w, 5);
  EXPECT_TRUE(cut.limit_exceeded);
  EXPECT_EQ(cut.cliques.size(), 5u);
  set_num_threads(4);
  const auto cut4 = enumerate_maximal_cliques(g, w, 5);
  set_num_threads(0);
  EXPECT_EQ(cut.cliques, cut4.cliques);
}

TEST(MaximalCliques, ThreadCountIndependent) {
  Rng rng(24);
  const auto a = oracle::random_graph(rng, 15, 0.6);
  const auto g = from_adjacency(a);
  std::vector<double> w;
  for (int i = 0; i < 15; ++i) w.push_back(0.1 * i);
  set_num_threads(1);
  const auto one = enumerate_maximal_cliques(g, w);
  set_num_threads(8);
  const auto eight = enumerate_maximal_cliques(g, w);
  set_num_threads(0);
  EXPECT_EQ(one.cliques, eight.cliques);
}

TEST(TopN, FirstNWithMinimumSize) {
  const std::vector<CliqueHypothesis> cs{{{0, 1, 2}, 5}, {{3, 4}, 4.5}, {{1, 5, 6}, 4}, {{2, 3, 7}, 3}, {{0, 8, 9}, 2}};
  const auto top = top_n_hypotheses(cs, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].members, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(top[1].members, (std::vector<int>{1, 5, 6}));
  EXPECT_EQ(top[2].members, (std::vector<int>{2, 3, 7}));
  EXPECT_EQ(top_n_hypotheses(cs, 1).size(), 1u);
}

TEST(TopN, NoLargeCliqueThrows) {
  const std::vector<CliqueHypothesis> cs{{{0, 1}, 2.0}, {{2}, 1.0}};
  EXPECT_THROW(top_n_hypotheses(cs, 3), EmptyHypothesisSet);
}
