#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace sigma;

namespace {

EmbeddedGraph planar(const SimpleGraph& g, const std::map<Vertex, std::pair<double, double>>& xy) {
  return EmbeddedGraph(g, rotation_from_coordinates(g, xy), 2, true);
}

EmbeddedGraph k4() {
  auto g = SimpleGraph::from_edges({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  return planar(g, {{0, {0, 0}}, {1, {4, 0}}, {2, {2, 4}}, {3, {2, 1}}});
}

EmbeddedGraph cube() {
  SimpleGraph g;
  for (int i = 0; i < 4; ++i) {
    g.add_edge(i, (i + 1) % 4);
    g.add_edge(4 + i, 4 + (i + 1) % 4);
    g.add_edge(i, i + 4);
  }
  return planar(g, {{0, {-2, -2}}, {1, {2, -2}}, {2, {2, 2}}, {3, {-2, 2}},
                    {4, {-1, -1}}, {5, {1, -1}}, {6, {1, 1}}, {7, {-1, 1}}});
}

SimpleGraph icosahedron() {
  SimpleGraph g;
  for (int i = 0; i < 5; ++i) {
    g.add_edge(0, 1 + i);
    g.add_edge(1 + i, 1 + (i + 1) % 5);
    g.add_edge(1 + i, 6 + i);
    g.add_edge(1 + i, 6 + (i + 1) % 5);
    g.add_edge(6 + i, 6 + (i + 1) % 5);
    g.add_edge(11, 6 + i);
  }
  return g;
}

EmbeddedGraph path4() {
  return EmbeddedGraph::from_rotation({{0, {1}}, {1, {0, 2}}, {2, {1, 3}}, {3, {2}}}, 2, true);
}

void expect_double_counting(const EmbeddedGraph& g) {
  auto faces = trace_faces(g);
  std::set<Dart> seen;
  std::size_t total = 0;
  for (const auto& f : faces) {
    total += f.degree();
    EXPECT_LE(f.order(), f.degree());
    for (const auto& d : f.walk) EXPECT_TRUE(seen.insert(d).second);
  }
  EXPECT_EQ(total, 2 * g.graph().size());
  EXPECT_EQ(seen.size(), 2 * g.graph().size());
}

}  // namespace

TEST(Faces, TriangleHasTwoFaces) {
  auto g = EmbeddedGraph::from_rotation({{0, {1, 2}}, {1, {2, 0}}, {2, {0, 1}}}, 2, true);
  auto faces = trace_faces(g);
  ASSERT_EQ(faces.size(), 2u);
  for (const auto& f : faces) EXPECT_EQ(f.degree(), 3u);
  expect_double_counting(g);
}

TEST(Faces, SingleEdgeIsOneFaceOfDegreeTwo) {
  auto g = EmbeddedGraph::from_rotation({{0, {1}}, {1, {0}}}, 2, true);
  auto faces = trace_faces(g);
  ASSERT_EQ(faces.size(), 1u);
  EXPECT_EQ(faces[0].degree(), 2u);
  EXPECT_EQ(faces[0].order(), 2u);
}

TEST(Faces, K4HasFourTriangles) {
  auto faces = trace_faces(k4());
  ASSERT_EQ(faces.size(), 4u);
  for (const auto& f : faces) EXPECT_EQ(f.degree(), 3u);
  EXPECT_EQ(euler_residual(k4()), 2);
  expect_double_counting(k4());
}

TEST(Faces, MalformedRotationIsStructuralError) {
  SimpleGraph g = SimpleGraph::from_edges({{0, 1}, {1, 2}});
  EmbeddedGraph::Rotation bad{{0, {1}}, {1, {0, 2}}, {2, {0}}};
  EXPECT_THROW(EmbeddedGraph(g, bad, 2, true), StructuralError);
}

TEST(Euler, CubeIsSpherical) { EXPECT_EQ(euler_residual(cube()), 2); }

TEST(Euler, K5RotationRealisesTorus) {
  EmbeddedGraph::Rotation r;
  for (int i = 0; i < 5; ++i)
    for (int k : {1, 2, 4, 3}) r[i].push_back((i + k) % 5);
  auto g = EmbeddedGraph::from_rotation(r, 0, true);
  EXPECT_EQ(trace_faces(g).size(), 5u);
  EXPECT_EQ(euler_residual(g), 0);
  expect_double_counting(g);
}

TEST(Degeneracy, TreesCyclesIcosahedron) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    SimpleGraph tree;
    tree.add_vertex(0);
    for (Vertex v = 1; v < 30; ++v) tree.add_edge(v, static_cast<Vertex>(uniform_below(rng, v)));
    auto d = degeneracy_ordering(tree);
    EXPECT_EQ(d.q, 1u);
    EXPECT_LE(max_back_degree(tree, d.order), d.q);
  }
  for (int n = 3; n < 12; ++n) {
    SimpleGraph c;
    for (int i = 0; i < n; ++i) c.add_edge(i, (i + 1) % n);
    EXPECT_EQ(degeneracy_ordering(c).q, 2u);
  }
  auto ico = icosahedron();
  auto d = degeneracy_ordering(ico);
  EXPECT_EQ(d.q, 5u);
  EXPECT_EQ(max_back_degree(ico, d.order), 5u);
}

TEST(Completion, K4Unchanged) { EXPECT_EQ(complete_to_edge_maximal(k4()), k4()); }

TEST(Completion, FourCycleGainsChordsAndClosesCorners) {
  auto c4 = EmbeddedGraph::from_rotation({{0, {1, 3}}, {1, {2, 0}}, {2, {3, 1}}, {3, {0, 2}}}, 2, true);
  auto g = complete_to_edge_maximal(c4);
  EXPECT_TRUE(consecutive_neighbours_adjacent(g));
  EXPECT_GE(g.graph().size(), 5u);
  EXPECT_EQ(euler_residual(g), 2);
  for (Vertex v : g.graph().vertices()) EXPECT_GE(g.graph().degree(v), 3u);
}

TEST(Completion, PathBecomesK4) {
  auto g = complete_to_edge_maximal(path4());
  EXPECT_EQ(g.graph().size(), 6u);
  EXPECT_EQ(euler_residual(g), 2);
  EXPECT_TRUE(consecutive_neighbours_adjacent(g));
}

TEST(Completion, IdempotentAndTriangulating) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    auto n = static_cast<std::size_t>(uniform_int(rng, 4, 60));
    auto g = fixtures::random_maximal_planar(n, rng);
    EXPECT_EQ(complete_to_edge_maximal(g), g);
    EXPECT_EQ(euler_residual(g), 2);
    EXPECT_EQ(g.graph().size(), 3 * n - 6);
    expect_double_counting(g);
  }
}

TEST(Completion, DisconnectedInputRejected) {
  auto g = EmbeddedGraph::from_rotation({{0, {1}}, {1, {0}}, {2, {3}}, {3, {2}}}, 2, false);
  EXPECT_THROW(complete_to_edge_maximal(g), PreconditionError);
}

TEST(Embedding, ContractionAndChordKeepSurface) {
  auto g = fixtures::bipyramid(8);
  auto h = g;
  h.contract(8, 0);
  h.validate();
  EXPECT_EQ(euler_residual(h), 2);
  auto k = g;
  k.delete_vertex(0, std::pair<Vertex, Vertex>{8, 9});
  EXPECT_TRUE(k.graph().has_edge(8, 9));
  EXPECT_EQ(euler_residual(k), 2);
}

TEST(Multigraph, ParallelEdgesAndDegrees) {
  auto h = fixtures::shannon(2);
  EXPECT_EQ(h.edge_count(), 6u);
  EXPECT_EQ(h.max_degree(), 4u);
  EXPECT_TRUE(h.connected());
  EXPECT_THROW(h.add_edge(0, 0), StructuralError);
}
