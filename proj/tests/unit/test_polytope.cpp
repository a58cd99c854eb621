#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace sigma;
using fixtures::from_pairs;

namespace {

EdgeVector<Rational> uniform(const Multigraph& h, const Rational& v) {
  EdgeVector<Rational> x;
  for (EdgeId e : h.edge_ids()) x[e] = v;
  return x;
}

}  // namespace

TEST(Matchings, Counts) {
  EXPECT_EQ(enumerate_matchings(from_pairs({{0, 1}})).size(), 2u);
  EXPECT_EQ(enumerate_matchings(fixtures::shannon(1)).size(), 4u);
  auto k4 = from_pairs({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto ms = enumerate_matchings(k4);
  EXPECT_EQ(ms.size(), 10u);
  EXPECT_TRUE(ms.front().empty());
  std::set<Matching> distinct(ms.begin(), ms.end());
  EXPECT_EQ(distinct.size(), ms.size());
}

TEST(Matchings, BudgetEnforced) {
  Multigraph h;
  for (int i = 0; i < 30; ++i) h.add_edge(2 * i, 2 * i + 1);
  EXPECT_THROW(enumerate_matchings(h), BudgetExceeded);
}

TEST(Edmonds, TriangleExamples) {
  auto t = fixtures::shannon(1);
  EXPECT_TRUE(edmonds_membership<Rational>(t, uniform(t, Rational(1, 3))).inside);
  auto out = edmonds_membership<Rational>(t, uniform(t, Rational(1, 2)));
  ASSERT_FALSE(out.inside);
  ASSERT_TRUE(out.violated);
  EXPECT_TRUE(out.violated->odd_set);
  EXPECT_EQ(out.violated->W, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(out.violated->slack, Rational(1, 2));
  EXPECT_GT(out.violated->lhs, out.violated->rhs);
  for (auto scale : {Rational(1), Rational(1, 3), Rational(1, 100)})
    EXPECT_TRUE(edmonds_membership<Rational>(t, uniform(t, Rational(0)), scale).inside);
}

TEST(Edmonds, RejectsNegativeEntries) {
  auto t = fixtures::shannon(1);
  auto x = uniform(t, Rational(1, 4));
  x[0] = Rational(-1, 4);
  EXPECT_THROW(edmonds_membership<Rational>(t, x), ValidationError);
}

TEST(Hull, Examples) {
  auto t = fixtures::shannon(1);
  EXPECT_TRUE(hull_membership_oracle(t, uniform(t, Rational(1, 3))).inside);
  EXPECT_FALSE(hull_membership_oracle(t, uniform(t, Rational(1, 2))).inside);
  auto p = from_pairs({{0, 1}, {1, 2}});
  EXPECT_FALSE(hull_membership_oracle(p, uniform(p, Rational(3, 5))).inside);
  auto in = hull_membership_oracle(t, uniform(t, Rational(1, 3)));
  Rational mass(0);
  for (const auto& [m, th] : in.combination) mass += th;
  EXPECT_LE(mass, Rational(1));
}

TEST(Hull, AgreesWithEdmondsOnSample) {
  Rng rng(17);
  auto cat = fixtures::catalogue(25);
  for (const auto& h : cat)
    for (int t = 0; t < 20; ++t) {
      auto x = fixtures::random_vector(h, rng);
      EXPECT_EQ(edmonds_membership<Rational>(h, x).inside, hull_membership_oracle(h, x).inside);
    }
}

TEST(Edmonds, MonotoneUnderDecrease) {
  Rng rng(23);
  for (const auto& h : fixtures::catalogue(20))
    for (int t = 0; t < 10; ++t) {
      auto x = fixtures::random_vector(h, rng);
      Rational scale(uniform_int(rng, 5, 10), 10);
      if (!edmonds_membership<Rational>(h, x, scale).inside) continue;
      auto y = x;
      for (auto& [e, v] : y) v *= Rational(uniform_int(rng, 0, 10), 10);
      EXPECT_TRUE(edmonds_membership<Rational>(h, y, scale).inside);
    }
}

TEST(ChiF, Examples) {
  EXPECT_EQ(fractional_chromatic_index(fixtures::shannon(1)), Rational(3));
  EXPECT_EQ(fractional_chromatic_index(from_pairs({{0, 1}})), Rational(1));
  EXPECT_EQ(fractional_chromatic_index(Multigraph{}), Rational(0));
  for (int mu = 1; mu <= 4; ++mu) EXPECT_EQ(fractional_chromatic_index(fixtures::shannon(mu)), Rational(3 * mu));
}

TEST(ChiF, ClosedFormMatchesBisection) {
  for (const auto& h : fixtures::catalogue(30))
    EXPECT_NEAR(to_double(fractional_chromatic_index(h)), fractional_chromatic_index_search(h), 1e-9);
}

TEST(Lemma, SingleEdgeHolds) {
  auto h = from_pairs({{0, 1}});
  auto rep = lem_mp_certificate(h, {{0, 1}, {1, 1}}, 4, Rational(0), Rational(0), {{0, Rational(6)}});
  EXPECT_TRUE(rep.hypotheses_hold);
  EXPECT_TRUE(rep.k_sufficient);
  EXPECT_TRUE(rep.conclusion_checked);
  EXPECT_FALSE(rep.falsified);
}

TEST(Lemma, SmallBReportsH2) {
  auto h = from_pairs({{0, 1}});
  auto rep = lem_mp_certificate(h, {{0, 1}, {1, 1}}, 4, Rational(0), Rational(0), {{0, Rational(5)}});
  EXPECT_FALSE(rep.hypotheses_hold);
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_EQ(rep.failures.front().rfind("H2'", 0), 0u);
  EXPECT_NE(rep.failures.front().find("slack -1"), std::string::npos);
}

TEST(Lemma, SigmaBelowDegreeReportsH1) {
  auto h = fixtures::shannon(2);
  auto rep = lem_mp_certificate(h, {{0, 3}, {1, 4}, {2, 4}}, 4, Rational(0), Rational(0),
                                {{0, 6}, {1, 6}, {2, 6}, {3, 6}, {4, 6}, {5, 6}});
  EXPECT_FALSE(rep.hypotheses_hold);
  EXPECT_EQ(rep.failures.front().rfind("H1'", 0), 0u);
}

TEST(Lemma, RandomInstancesAreNeverFalsified) {
  Rng rng(31);
  for (const auto& h : fixtures::catalogue(40)) {
    auto li = fixtures::random_lemma_instance(h, rng);
    auto rep = lem_mp_certificate(li.h, li.sigma, li.beta, Rational(li.zeta), li.K, li.b);
    EXPECT_TRUE(rep.hypotheses_hold);
    EXPECT_TRUE(rep.conclusion_checked);
    EXPECT_FALSE(rep.falsified) << rep.falsification;
  }
  EXPECT_EQ(lemma_k_threshold(Rational(-2)), Rational(0));
  EXPECT_EQ(lemma_k_threshold(Rational(3)), Rational(27, 2));
}
