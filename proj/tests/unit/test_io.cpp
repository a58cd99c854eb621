#include <gtest/gtest.h>

#include <sstream>

#include "support/fixtures.hpp"

using namespace sigma;

namespace {

template <class W, class R>
auto round_trip(W write, R read) {
  std::stringstream ss;
  write(ss);
  return read(ss);
}

std::vector<std::tuple<EdgeId, Vertex, Vertex>> edge_triples(const Multigraph& h) {
  std::vector<std::tuple<EdgeId, Vertex, Vertex>> out;
  for (const auto& e : h.edges()) out.emplace_back(e.id, e.u, e.v);
  return out;
}

std::string text(const std::function<void(std::ostream&)>& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

}  // namespace

TEST(RoundTrip, EmbeddedGraph) {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    auto g = fixtures::thin(fixtures::random_maximal_planar(12, rng), 0.7, rng);
    auto back = round_trip([&](std::ostream& o) { io::write_embedded(o, g); }, io::read_embedded);
    EXPECT_EQ(back.rotation(), g.rotation());
    EXPECT_EQ(back.surface_chi(), g.surface_chi());
    EXPECT_EQ(back.cellular(), g.cellular());
  }
}

TEST(RoundTrip, GraphWithIsolatedVertex) {
  SimpleGraph g;
  g.add_edge(0, 1);
  g.add_edge(1, 5);
  g.add_vertex(9);
  auto back = round_trip([&](std::ostream& o) { io::write_graph(o, g); }, io::read_graph);
  EXPECT_EQ(back.vertices(), g.vertices());
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(RoundTrip, MultigraphKeepsEdgeIds) {
  auto h = fixtures::shannon(3);
  h.add_vertex(40);
  auto back = round_trip([&](std::ostream& o) { io::write_multigraph(o, h); }, io::read_multigraph);
  EXPECT_EQ(edge_triples(back), edge_triples(h));
  EXPECT_EQ(back.vertices(), h.vertices());
}

TEST(RoundTrip, SigmaListsColouring) {
  auto w = wegner(3);
  auto s = round_trip([&](std::ostream& o) { io::write_sigma(o, w.sigma); }, io::read_sigma);
  EXPECT_EQ(s.sets(), w.sigma.sets());
  ListAssignment l{{0, {1, 4, 9}}, {3, {2}}};
  EXPECT_EQ(round_trip([&](std::ostream& o) { io::write_lists(o, l); }, io::read_lists), l);
  std::map<std::int64_t, Colour> c{{0, 3}, {7, 1}};
  EXPECT_EQ(round_trip([&](std::ostream& o) { io::write_colouring(o, c); }, io::read_colouring), c);
}

TEST(RoundTrip, MatchingInstance) {
  MatchingInstance mi;
  mi.h = fixtures::shannon(2);
  mi.lists = uniform_edge_lists(mi.h, 3, 4);
  mi.sigma = {{0, 5}, {1, 7}};
  mi.origin = {{0, 10}, {1, 11}};
  auto back = round_trip([&](std::ostream& o) { io::write_matching_instance(o, mi); }, io::read_matching_instance);
  EXPECT_EQ(edge_triples(back.h), edge_triples(mi.h));
  EXPECT_EQ(back.lists, mi.lists);
  EXPECT_EQ(back.sigma, mi.sigma);
  EXPECT_EQ(back.origin, mi.origin);
}

TEST(RoundTrip, VectorsExactAndReal) {
  EdgeVector<Rational> x{{0, Rational(1, 3)}, {4, Rational(2)}, {5, Rational(0)}};
  EXPECT_EQ(round_trip([&](std::ostream& o) { io::write_marginals(o, x); }, io::read_marginals), x);
  EdgeVector<double> lam{{0, 0.1}, {1, 1.0 / 3.0}, {2, 12345.678901234567}};
  auto back = round_trip([&](std::ostream& o) { io::write_reals(o, "lam", lam); },
                         [](std::istream& i) { return io::read_reals(i, "lam"); });
  EXPECT_EQ(back, lam);
}

TEST(Parse, CommentsAndColons) {
  std::istringstream in("# header\nsurface_chi 2 cellular 1\nrot 0:1 # trailing\n\nrot 1 : 0\n");
  auto g = io::read_embedded(in);
  EXPECT_EQ(g.graph().size(), 1u);
}

TEST(Parse, ErrorsNameTheLine) {
  auto fails = [](const std::string& s, auto reader, const std::string& needle) {
    std::istringstream in(s);
    try {
      reader(in);
    } catch (const io::ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "no parse error for: " << s;
  };
  fails("", io::read_embedded, "empty");
  fails("surface_chi x cellular 1\n", io::read_embedded, "line 1");
  fails("surface_chi 2 cellular 3\n", io::read_embedded, "cellular flag");
  fails("surface_chi 2 cellular 1\nrot 0: 1\nrot 0: 1\n", io::read_embedded, "line 3");
  fails("edge 1 1\n", io::read_graph, "loop");
  fails("edge 1\n", io::read_graph, "wrong number");
  fails("edge 0 1 0\nedge 1 2 0\n", io::read_multigraph, "line 2");
  fails("sigma 1 2 3\n", io::read_sigma, "expected 'sigma");
  fails("list 0: a\n", io::read_lists, "expected integer");
  fails("col 0 1\ncol 0 2\n", io::read_colouring, "duplicate");
  fails("bogus 1\n", io::read_colouring, "unknown record");
  fails("x 0 1/0\n", io::read_marginals, "line 1");
  fails("edge 0 1 0\nlist 5: 1\n", io::read_matching_instance, "unknown edge");
}

TEST(Write, CanonicalText) {
  SimpleGraph g;
  g.add_edge(2, 1);
  g.add_edge(0, 1);
  EXPECT_EQ(text([&](std::ostream& o) { io::write_graph(o, g); }), "edge 0 1\nedge 1 2\n");
  EXPECT_EQ(text([&](std::ostream& o) { io::write_sigma(o, SigmaSystem(SigmaSystem::Sets{{3, {1, 2}}})); }),
            "sigma 3: 1 2\n");
}
