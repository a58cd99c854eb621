#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace sigma;
using fixtures::from_pairs;

TEST(Init, SingleEdgeTwoColours) {
  auto h = from_pairs({{0, 1}});
  auto st = init_state(h, {{0, {1, 2}}}, 0.1);
  ASSERT_EQ(st.colour_graph.size(), 2u);
  for (const auto& [a, lam] : st.activities) EXPECT_NEAR(lam.at(0), 1.0, 1e-9);
  check_state(st);
}

TEST(Init, TriangleBoundaryAndInterior) {
  auto t = fixtures::shannon(1);
  EXPECT_THROW(init_state(t, uniform_edge_lists(t, 3), 0.1), PreconditionError);
  auto st = init_state(t, uniform_edge_lists(t, 4), 0.25);
  for (EdgeId e : t.edge_ids()) {
    double sum = 0;
    for (const auto& [a, lam] : st.activities) {
      HardcoreModel<double> m(t.edge_subgraph({t.edge_ids()}), lam);
      sum += m.marginals().at(e);
    }
    EXPECT_NEAR(sum, 1.0, 1e-8);
  }
  EXPECT_THROW(init_state(t, {{0, {1}}, {1, {}}, {2, {1}}}, 0.1), PreconditionError);
}

TEST(Step, SingleEdgeColouredWithProbabilityThreeQuarters) {
  auto h = from_pairs({{0, 1}});
  auto st = init_state(h, {{0, {1, 2}}}, 0.1);
  int coloured = 0;
  const int N = 10000;
  for (int i = 0; i < N; ++i) coloured += naive_step(st, substream(5, {static_cast<std::uint64_t>(i)})).committed.size();
  EXPECT_NEAR(coloured / double(N), 0.75, 0.02);
}

TEST(Step, EmptyColourGraphsAreAFixpoint) {
  auto h = from_pairs({{0, 1}});
  auto st = init_state(h, {{0, {1, 2}}}, 0.1);
  ColourState done = st;
  for (auto& [a, es] : done.colour_graph) es.clear();
  done.lists.clear();
  done.committed[0] = 1;
  auto next = naive_step(done, 3);
  EXPECT_EQ(next.committed, done.committed);
  EXPECT_EQ(next.colour_graph, done.colour_graph);
}

TEST(Step, DeterministicAcrossSeedsAndThreads) {
  auto h = fixtures::shannon(2);
  auto st = init_state(h, uniform_edge_lists(h, 8), 0.1);
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
    auto a = naive_step(st, seed, nullptr, 1);
    auto b = naive_step(st, seed, nullptr, 1);
    auto c = naive_step(st, seed, nullptr, 4);
    EXPECT_EQ(a.committed, b.committed);
    EXPECT_EQ(a.committed, c.committed);
    EXPECT_EQ(a.colour_graph, c.colour_graph);
  }
}

TEST(Step, InvariantsAlongATrajectory) {
  auto h = fixtures::catalogue(12).back();
  auto lists = uniform_edge_lists(h, 2 * h.max_degree());
  auto st = init_state(h, lists, 0.1);
  const auto activities = st.activities;
  for (int i = 0; i < 6; ++i) {
    auto next = naive_step(st, 11);
    check_state(next);
    for (const auto& [a, es] : next.colour_graph)
      for (EdgeId e : es) EXPECT_TRUE(st.colour_graph.at(a).count(e));
    for (const auto& [e, c] : st.committed) EXPECT_EQ(next.committed.at(e), c);
    EXPECT_EQ(next.activities, activities);
    st = std::move(next);
  }
}

TEST(Greedy, Examples) {
  auto m = from_pairs({{0, 1}, {2, 3}});
  auto c = greedy_finish(m, {{0, {5, 6}}, {1, {7, 8}}}, 1);
  EXPECT_EQ(c.at(0), 5);
  EXPECT_EQ(c.at(1), 7);
  auto star = from_pairs({{0, 1}, {0, 2}, {0, 3}});
  auto cs = greedy_finish(star, uniform_edge_lists(star, 6), 3);
  EXPECT_FALSE(edge_colouring_defect(star, uniform_edge_lists(star, 6), cs));
  EXPECT_THROW(greedy_finish(star, uniform_edge_lists(star, 5), 3), PreconditionError);
}

TEST(Run, AmpleListsAlwaysSucceed) {
  for (const auto& h : fixtures::catalogue(20))
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      KahnParams p;
      p.seed = seed;
      auto lists = uniform_edge_lists(h, 2 * h.max_degree());
      auto r = run(h, lists, p, 0.1);
      ASSERT_TRUE(r.success) << r.failure;
      EXPECT_FALSE(edge_colouring_defect(h, lists, r.colouring));
    }
}

TEST(Run, ShannonTightListsValidateWhenSuccessful) {
  auto h = fixtures::shannon(2);
  auto lists = uniform_edge_lists(h, 7);
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    KahnParams p;
    p.seed = seed;
    auto r = run(h, lists, p, 0.1);
    EXPECT_TRUE(r.hypotheses_met);
    EXPECT_FALSE(r.greedy_only);
    if (!r.success) continue;
    ++ok;
    EXPECT_FALSE(edge_colouring_defect(h, lists, r.colouring));
    EXPECT_GE(r.steps, 1u);
  }
  EXPECT_GT(ok, 0);
}

TEST(Run, FullScheduleWithoutEarlyFinish) {
  auto h = fixtures::shannon(2);
  auto lists = uniform_edge_lists(h, 10);
  KahnParams p;
  p.early_finish = false;
  p.s = 3;
  p.T = 1;
  p.retries = 30;
  auto r = run(h, lists, p, 0.1);
  if (r.success) {
    EXPECT_EQ(r.steps, 3u);
    EXPECT_FALSE(edge_colouring_defect(h, lists, r.colouring));
  } else {
    EXPECT_EQ(r.attempts, 31u);
  }
  EXPECT_EQ(telemetry_csv(r.telemetry).rfind("step,colour,matched,remaining\n", 0), 0u);
}

TEST(Run, MembershipFailureIsReported) {
  auto t = fixtures::shannon(1);
  auto r = run(t, uniform_edge_lists(t, 3), KahnParams{}, 0.1);
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.hypotheses_met);
  EXPECT_NE(r.failure.find("theorem hypotheses unmet"), std::string::npos);
}

TEST(Run, DeterministicUnderFixedSeed) {
  auto h = fixtures::shannon(2);
  auto lists = uniform_edge_lists(h, 8);
  KahnParams p;
  p.seed = 42;
  p.threads = 1;
  auto a = run(h, lists, p, 0.1);
  p.threads = 3;
  auto b = run(h, lists, p, 0.1);
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.colouring, b.colouring);
  EXPECT_EQ(telemetry_csv(a.telemetry), telemetry_csv(b.telemetry));
}
