#pragma once

#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "random.hpp"
#include "sigma_system.hpp"

namespace sigma {

struct Instance {
  EmbeddedGraph graph;
  SigmaSystem sigma;
};

// Vertices x, y, z; k-1 vertices joined to x and y; k joined to x and z;
// k joined to y and z; plus the edge xy. Maximum degree 2k and all vertices
// except z pairwise within distance two.
inline Instance wegner(int k) {
  if (k < 2) throw PreconditionError("wegner: k must be >= 2");
  const Vertex x = 0, y = 1, z = 2;
  SimpleGraph g;
  std::map<Vertex, std::pair<double, double>> xy{{x, {0, 0}}, {y, {2, 0}}, {z, {1, -10}}};
  g.add_edge(x, y);
  Vertex next = 3;
  for (int i = 1; i <= k - 1; ++i, ++next) {
    g.add_edge(next, x);
    g.add_edge(next, y);
    xy[next] = {1.0, static_cast<double>(i)};
  }
  for (int j = 1; j <= k; ++j, ++next) {
    g.add_edge(next, x);
    g.add_edge(next, z);
    xy[next] = {-static_cast<double>(j), -5.0};
  }
  for (int j = 1; j <= k; ++j, ++next) {
    g.add_edge(next, y);
    g.add_edge(next, z);
    xy[next] = {2.0 + j, -5.0};
  }
  EmbeddedGraph eg(g, rotation_from_coordinates(g, xy), 2, true);
  return {eg, SigmaSystem::neighbourhoods(g)};
}

// Subdivided triangular prism: triangles a1b1c1 and akbkck joined by three
// paths on k vertices each; three faces of order 2k.
inline Instance borodin(int k) {
  if (k < 2) throw PreconditionError("borodin: k must be >= 2");
  SimpleGraph g;
  std::map<Vertex, std::pair<double, double>> xy;
  constexpr double pi = std::numbers::pi;
  const double angle[3] = {pi / 2, pi / 2 + 2 * pi / 3, pi / 2 + 4 * pi / 3};
  auto id = [k](int path, int i) { return static_cast<Vertex>(path * k + i - 1); };
  for (int p = 0; p < 3; ++p)
    for (int i = 1; i <= k; ++i) {
      xy[id(p, i)] = {i * std::cos(angle[p]), i * std::sin(angle[p])};
      if (i > 1) g.add_edge(id(p, i - 1), id(p, i));
    }
  for (int end : {1, k})
    for (int p = 0; p < 3; ++p) g.add_edge(id(p, end), id((p + 1) % 3, end));
  EmbeddedGraph eg(g, rotation_from_coordinates(g, xy), 2, true);
  return {eg, SigmaSystem{}};
}

// K_n with every edge subdivided once; Σ(branch) = ∅, Σ(subdivision) = its two
// neighbours. Embedded by sorted rotations on the orientable surface they trace.
inline Instance subdivided_complete(int n) {
  if (n < 4) throw PreconditionError("subdivided_complete: n must be >= 4");
  SimpleGraph g;
  SigmaSystem::Sets sets;
  Vertex next = n;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j, ++next) {
      g.add_edge(i, next);
      g.add_edge(j, next);
      sets[next] = {i, j};
    }
  EmbeddedGraph::Rotation rot;
  for (const auto& [v, nb] : g.adjacency()) rot[v].assign(nb.begin(), nb.end());
  EmbeddedGraph eg(g, rot, 2, true);
  eg.set_surface(static_cast<int>(euler_residual(eg)), true);
  return {eg, SigmaSystem(std::move(sets))};
}

inline Instance generate_family(const std::string& name, int k) {
  if (name == "wegner") return wegner(k);
  if (name == "borodin") return borodin(k);
  if (name == "subdivided_complete") return subdivided_complete(k);
  throw PreconditionError("unknown family '" + name + "'");
}

inline std::size_t max_face_order(const EmbeddedGraph& g) {
  std::size_t best = 0;
  for (const auto& f : trace_faces(g)) best = std::max(best, f.order());
  return best;
}

struct CyclicInstance {
  SimpleGraph graph;                // G_F
  SigmaSystem sigma;                // Σ_F
  std::set<Vertex> face_vertices;   // the added x_f
  std::map<Vertex, std::size_t> face_of;  // x_f -> index into trace_faces order
};

// G_F: one new vertex per face, adjacent to the boundary vertices, with
// Σ_F(x_f) = boundary of f and Σ_F ≡ ∅ on original vertices.
inline CyclicInstance cyclic_instance(const EmbeddedGraph& g) {
  if (!g.cellular()) throw PreconditionError("cyclic_instance: embedding is not declared cellular");
  auto faces = trace_faces(g);
  CyclicInstance ci;
  ci.graph = g.graph();
  Vertex next = g.graph().max_vertex_id() + 1;
  SigmaSystem::Sets sets;
  for (std::size_t i = 0; i < faces.size(); ++i, ++next) {
    ci.graph.add_vertex(next);
    for (Vertex v : faces[i].boundary) ci.graph.add_edge(next, v);
    sets[next] = std::set<Vertex>(faces[i].boundary.begin(), faces[i].boundary.end());
    ci.face_vertices.insert(next);
    ci.face_of[next] = i;
  }
  ci.sigma = SigmaSystem(std::move(sets));
  return ci;
}

// ---- random planar instances ---------------------------------------------

// Random tree with a random rotation, closed to an edge-maximal sphere embedding.
inline EmbeddedGraph random_maximal_planar(std::size_t n, Rng& rng) {
  EmbeddedGraph::Rotation rot;
  rot[0];
  for (Vertex v = 1; v < static_cast<Vertex>(n); ++v) {
    Vertex p = static_cast<Vertex>(uniform_below(rng, v));
    rot[v].push_back(p);
    auto& r = rot[p];
    r.insert(r.begin() + static_cast<long>(uniform_below(rng, r.size() + 1)), v);
  }
  return complete_to_edge_maximal(EmbeddedGraph::from_rotation(std::move(rot), 2, true));
}

// Removes edges at random while the graph stays connected; the embedding is
// inherited, so the residual is unchanged as long as faces merge pairwise.
inline EmbeddedGraph thin_planar(const EmbeddedGraph& g, double keep, Rng& rng) {
  auto rot = g.rotation();
  for (auto [u, v] : g.graph().edges()) {
    if (uniform01(rng) < keep) continue;
    auto trial = rot;
    std::erase(trial[u], v);
    std::erase(trial[v], u);
    auto cand = EmbeddedGraph::from_rotation(trial, 2, false);
    if (cand.graph().connected()) rot = std::move(trial);
  }
  auto out = EmbeddedGraph::from_rotation(std::move(rot), 2, false);
  out.set_surface(2, euler_residual(out) == 2);
  return out;
}

}  // namespace sigma
