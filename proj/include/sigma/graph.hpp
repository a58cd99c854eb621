#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sigma {

using Vertex = std::int64_t;
using EdgeId = std::int64_t;
using Colour = std::int64_t;

inline std::string vstr(Vertex v) { return std::to_string(v); }

// Simple undirected graph with ordered vertex ids and sorted adjacency.
class SimpleGraph {
 public:
  using Adjacency = std::map<Vertex, std::set<Vertex>>;

  SimpleGraph() = default;

  static SimpleGraph from_edges(const std::vector<std::pair<Vertex, Vertex>>& edges) {
    SimpleGraph g;
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  void add_vertex(Vertex v) { adj_.try_emplace(v); }

  // Adds endpoints as needed; adding an existing edge is a no-op.
  void add_edge(Vertex u, Vertex v) {
    if (u == v) throw StructuralError("loop at vertex " + vstr(u));
    adj_[u].insert(v);
    adj_[v].insert(u);
  }

  void remove_edge(Vertex u, Vertex v) {
    if (auto it = adj_.find(u); it != adj_.end()) it->second.erase(v);
    if (auto it = adj_.find(v); it != adj_.end()) it->second.erase(u);
  }

  void remove_vertex(Vertex v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) return;
    for (Vertex u : it->second) adj_[u].erase(v);
    adj_.erase(it);
  }

  bool has_vertex(Vertex v) const { return adj_.count(v) != 0; }

  bool has_edge(Vertex u, Vertex v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) != 0;
  }

  const std::set<Vertex>& neighbours(Vertex v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw PreconditionError("unknown vertex " + vstr(v));
    return it->second;
  }

  std::size_t degree(Vertex v) const { return neighbours(v).size(); }

  std::size_t order() const { return adj_.size(); }

  std::size_t size() const {
    std::size_t twice = 0;
    for (const auto& [v, nb] : adj_) twice += nb.size();
    return twice / 2;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& [v, nb] : adj_) d = std::max(d, nb.size());
    return d;
  }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    out.reserve(adj_.size());
    for (const auto& [v, nb] : adj_) out.push_back(v);
    return out;
  }

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (const auto& [u, nb] : adj_)
      for (Vertex v : nb)
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  Vertex max_vertex_id() const { return adj_.empty() ? -1 : adj_.rbegin()->first; }

  const Adjacency& adjacency() const { return adj_; }

  SimpleGraph induced(const std::set<Vertex>& keep) const {
    SimpleGraph h;
    for (Vertex v : keep) {
      if (!has_vertex(v)) continue;
      h.add_vertex(v);
      for (Vertex u : neighbours(v))
        if (keep.count(u)) h.add_edge(v, u);
    }
    return h;
  }

  std::vector<std::set<Vertex>> components() const {
    std::vector<std::set<Vertex>> out;
    std::set<Vertex> seen;
    for (const auto& [s, nb] : adj_) {
      if (seen.count(s)) continue;
      std::set<Vertex> comp{s};
      std::vector<Vertex> stack{s};
      seen.insert(s);
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex u : adj_.at(v))
          if (seen.insert(u).second) {
            comp.insert(u);
            stack.push_back(u);
          }
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  bool connected() const { return components().size() <= 1; }

  friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

 private:
  Adjacency adj_;
};

struct MultiEdge {
  EdgeId id;
  Vertex u;
  Vertex v;

  Vertex other(Vertex w) const { return w == u ? v : u; }
  bool touches(Vertex w) const { return u == w || v == w; }

  friend bool operator==(const MultiEdge&, const MultiEdge&) = default;
};

// Loopless multigraph; parallel edges allowed, edge ids unique.
class Multigraph {
 public:
  Multigraph() = default;

  void add_vertex(Vertex v) { vertices_.insert(v); }

  EdgeId add_edge(Vertex u, Vertex v, EdgeId id) {
    if (u == v) throw StructuralError("loop at vertex " + vstr(u));
    if (edges_.count(id)) throw StructuralError("duplicate edge id " + std::to_string(id));
    vertices_.insert(u);
    vertices_.insert(v);
    edges_.emplace(id, MultiEdge{id, std::min(u, v), std::max(u, v)});
    return id;
  }

  EdgeId add_edge(Vertex u, Vertex v) { return add_edge(u, v, next_edge_id()); }

  EdgeId next_edge_id() const { return edges_.empty() ? 0 : edges_.rbegin()->first + 1; }

  void remove_edge(EdgeId id) { edges_.erase(id); }

  const std::set<Vertex>& vertices() const { return vertices_; }

  bool has_edge(EdgeId id) const { return edges_.count(id) != 0; }

  const MultiEdge& edge(EdgeId id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw PreconditionError("unknown edge id " + std::to_string(id));
    return it->second;
  }

  // Edges ordered by id.
  std::vector<MultiEdge> edges() const {
    std::vector<MultiEdge> out;
    out.reserve(edges_.size());
    for (const auto& [id, e] : edges_) out.push_back(e);
    return out;
  }

  std::vector<EdgeId> edge_ids() const {
    std::vector<EdgeId> out;
    for (const auto& [id, e] : edges_) out.push_back(id);
    return out;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::size_t degree(Vertex v) const {
    std::size_t d = 0;
    for (const auto& [id, e] : edges_) d += e.touches(v) ? 1 : 0;
    return d;
  }

  std::map<Vertex, std::size_t> degrees() const {
    std::map<Vertex, std::size_t> d;
    for (Vertex v : vertices_) d[v] = 0;
    for (const auto& [id, e] : edges_) {
      ++d[e.u];
      ++d[e.v];
    }
    return d;
  }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (const auto& [v, d] : degrees()) best = std::max(best, d);
    return best;
  }

  std::vector<EdgeId> incident(Vertex v) const {
    std::vector<EdgeId> out;
    for (const auto& [id, e] : edges_)
      if (e.touches(v)) out.push_back(id);
    return out;
  }

  // Same vertex set, only the listed edges.
  Multigraph edge_subgraph(const std::vector<EdgeId>& keep) const {
    Multigraph h;
    h.vertices_ = vertices_;
    for (EdgeId id : keep) h.edges_.emplace(id, edge(id));
    return h;
  }

  bool connected() const {
    if (vertices_.empty()) return true;
    std::map<Vertex, std::vector<Vertex>> nb;
    for (const auto& [id, e] : edges_) {
      nb[e.u].push_back(e.v);
      nb[e.v].push_back(e.u);
    }
    std::set<Vertex> seen{*vertices_.begin()};
    std::vector<Vertex> stack{*vertices_.begin()};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : nb[v])
        if (seen.insert(u).second) stack.push_back(u);
    }
    return seen.size() == vertices_.size();
  }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  std::set<Vertex> vertices_;
  std::map<EdgeId, MultiEdge> edges_;
};

struct Dart {
  Vertex from;
  Vertex to;
  friend auto operator<=>(const Dart&, const Dart&) = default;
};

struct Face {
  std::vector<Dart> walk;  // boundary walk; walk[i].to == walk[i+1].from cyclically
  std::vector<Vertex> boundary;  // distinct boundary vertices, sorted

  std::size_t degree() const { return walk.size(); }
  std::size_t order() const { return boundary.size(); }
};

// A simple graph together with a rotation system and the declared surface.
class EmbeddedGraph {
 public:
  using Rotation = std::map<Vertex, std::vector<Vertex>>;

  EmbeddedGraph() = default;

  EmbeddedGraph(SimpleGraph g, Rotation rotation, int surface_chi, bool cellular)
      : graph_(std::move(g)), rotation_(std::move(rotation)), chi_(surface_chi), cellular_(cellular) {
    validate();
  }

  // Builds the graph from the rotation lists; adjacency must be symmetric.
  static EmbeddedGraph from_rotation(Rotation rotation, int surface_chi, bool cellular) {
    SimpleGraph g;
    for (const auto& [v, order] : rotation) {
      g.add_vertex(v);
      for (Vertex u : order) {
        if (u == v) throw StructuralError("loop in rotation of " + vstr(v));
        auto it = rotation.find(u);
        if (it == rotation.end() || std::find(it->second.begin(), it->second.end(), v) == it->second.end())
          throw StructuralError("rotation not symmetric: " + vstr(v) + " lists " + vstr(u));
        g.add_edge(v, u);
      }
    }
    return EmbeddedGraph(std::move(g), std::move(rotation), surface_chi, cellular);
  }

  const SimpleGraph& graph() const { return graph_; }
  const Rotation& rotation() const { return rotation_; }
  const std::vector<Vertex>& rotation(Vertex v) const {
    auto it = rotation_.find(v);
    if (it == rotation_.end()) throw PreconditionError("unknown vertex " + vstr(v));
    return it->second;
  }
  int surface_chi() const { return chi_; }
  bool cellular() const { return cellular_; }
  void set_surface(int chi, bool cellular) {
    chi_ = chi;
    cellular_ = cellular;
  }

  // Neighbour following u in the circular order at v.
  Vertex successor(Vertex v, Vertex u) const {
    const auto& r = rotation(v);
    return r[(index_of(r, u, v) + 1) % r.size()];
  }

  Vertex predecessor(Vertex v, Vertex u) const {
    const auto& r = rotation(v);
    return r[(index_of(r, u, v) + r.size() - 1) % r.size()];
  }

  // Adds edge u1u2 across the corner (u1, v, u2) where u2 follows u1 at v.
  void add_chord(Vertex u1, Vertex v, Vertex u2) {
    if (graph_.has_edge(u1, u2)) return;
    auto& r1 = rotation_.at(u1);
    r1.insert(r1.begin() + static_cast<std::ptrdiff_t>(index_of(r1, v, u1)), u2);
    auto& r2 = rotation_.at(u2);
    r2.insert(r2.begin() + static_cast<std::ptrdiff_t>(index_of(r2, v, u2) + 1), u1);
    graph_.add_edge(u1, u2);
  }

  // Removes v; with `chord` set, joins the given two neighbours of v at the
  // positions v occupied in their rotations (the merged face is split again).
  void delete_vertex(Vertex v, std::optional<std::pair<Vertex, Vertex>> chord = std::nullopt) {
    if (chord) {
      auto [a, b] = *chord;
      if (!graph_.has_edge(v, a) || !graph_.has_edge(v, b) || a == b)
        throw PreconditionError("chord endpoints must be distinct neighbours of " + vstr(v));
      if (!graph_.has_edge(a, b)) {
        replace_in_rotation(a, v, b);
        replace_in_rotation(b, v, a);
        graph_.add_edge(a, b);
      }
    }
    for (Vertex u : graph_.neighbours(v)) {
      auto& r = rotation_.at(u);
      r.erase(std::remove(r.begin(), r.end(), v), r.end());
    }
    graph_.remove_vertex(v);
    rotation_.erase(v);
  }

  // Contracts edge (keep, gone) into `keep`; parallel edges are dropped.
  // Returns the neighbours `keep` gained.
  std::vector<Vertex> contract(Vertex keep, Vertex gone) {
    if (!graph_.has_edge(keep, gone)) throw PreconditionError("contract: " + vstr(keep) + vstr(gone) + " is not an edge");
    const auto& rg = rotation_.at(gone);
    std::size_t at = index_of(rg, keep, gone);
    std::vector<Vertex> spliced;
    for (std::size_t i = 1; i < rg.size(); ++i) spliced.push_back(rg[(at + i) % rg.size()]);

    std::vector<Vertex> gained;
    std::vector<Vertex> fresh;
    for (Vertex w : spliced)
      if (!graph_.has_edge(keep, w)) fresh.push_back(w);

    // Rotation at keep: replace `gone` with the spliced run of new neighbours.
    auto& rk = rotation_.at(keep);
    std::size_t pos = index_of(rk, gone, keep);
    std::vector<Vertex> updated(rk.begin(), rk.begin() + static_cast<std::ptrdiff_t>(pos));
    updated.insert(updated.end(), fresh.begin(), fresh.end());
    updated.insert(updated.end(), rk.begin() + static_cast<std::ptrdiff_t>(pos + 1), rk.end());
    rk = std::move(updated);

    for (Vertex w : spliced) {
      auto& rw = rotation_.at(w);
      if (std::find(fresh.begin(), fresh.end(), w) != fresh.end()) {
        replace_in_rotation(w, gone, keep);
        gained.push_back(w);
      } else {
        rw.erase(std::remove(rw.begin(), rw.end(), gone), rw.end());
      }
    }
    for (Vertex w : spliced) graph_.remove_edge(gone, w);
    graph_.remove_vertex(gone);
    rotation_.erase(gone);
    for (Vertex w : fresh) graph_.add_edge(keep, w);
    return gained;
  }

  void validate() const {
    if (chi_ > 2) throw StructuralError("surface Euler characteristic must be <= 2");
    for (const auto& [v, nb] : graph_.adjacency()) {
      auto it = rotation_.find(v);
      if (it == rotation_.end()) throw StructuralError("missing rotation for vertex " + vstr(v));
      std::vector<Vertex> sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw StructuralError("repeated neighbour in rotation of " + vstr(v));
      if (!std::equal(sorted.begin(), sorted.end(), nb.begin(), nb.end())) {
        for (Vertex u : it->second)
          if (!nb.count(u)) throw StructuralError("rotation of " + vstr(v) + " lists non-neighbour " + vstr(u));
        throw StructuralError("rotation of " + vstr(v) + " misses a neighbour");
      }
    }
    if (rotation_.size() != graph_.order()) throw StructuralError("rotation lists a vertex not in the graph");
  }

  friend bool operator==(const EmbeddedGraph&, const EmbeddedGraph&) = default;

 private:
  static std::size_t index_of(const std::vector<Vertex>& r, Vertex u, Vertex at) {
    auto it = std::find(r.begin(), r.end(), u);
    if (it == r.end()) throw StructuralError(vstr(u) + " is not in the rotation of " + vstr(at));
    return static_cast<std::size_t>(it - r.begin());
  }

  void replace_in_rotation(Vertex at, Vertex from, Vertex to) {
    auto& r = rotation_.at(at);
    r[index_of(r, from, at)] = to;
  }

  SimpleGraph graph_;
  Rotation rotation_;
  int chi_ = 2;
  bool cellular_ = true;
};

// Orientable next-edge rule: after dart (u,v) comes (v, successor of u at v).
inline std::vector<Face> trace_faces(const EmbeddedGraph& g) {
  g.validate();
  std::vector<Face> faces;
  std::set<Dart> seen;
  const auto& G = g.graph();
  for (const auto& [u, nb] : G.adjacency()) {
    if (nb.empty() && G.order() == 1) faces.push_back(Face{{}, {u}});
    for (Vertex v : g.rotation(u)) {
      Dart start{u, v};
      if (seen.count(start)) continue;
      Face f;
      Dart cur = start;
      std::set<Vertex> bnd;
      while (seen.insert(cur).second) {
        f.walk.push_back(cur);
        bnd.insert(cur.from);
        cur = Dart{cur.to, g.successor(cur.to, cur.from)};
      }
      if (!(cur == start)) throw StructuralError("face trace did not close");
      f.boundary.assign(bnd.begin(), bnd.end());
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

// |V| - |E| + |F| with one extra face per isolated vertex of a larger graph.
inline long euler_residual(const EmbeddedGraph& g) {
  const auto& G = g.graph();
  long faces = static_cast<long>(trace_faces(g).size());
  if (G.order() > 1)
    for (const auto& [v, nb] : G.adjacency())
      if (nb.empty()) ++faces;
  return static_cast<long>(G.order()) - static_cast<long>(G.size()) + faces;
}

// Rotation system read off a straight-line drawing (counter-clockwise order).
template <class Coords>
EmbeddedGraph::Rotation rotation_from_coordinates(const SimpleGraph& g, const Coords& xy) {
  EmbeddedGraph::Rotation rot;
  for (const auto& [v, nb] : g.adjacency()) {
    std::vector<std::pair<double, Vertex>> keyed;
    auto [vx, vy] = xy.at(v);
    for (Vertex u : nb) {
      auto [ux, uy] = xy.at(u);
      keyed.emplace_back(std::atan2(uy - vy, ux - vx), u);
    }
    std::sort(keyed.begin(), keyed.end());
    auto& r = rot[v];
    for (auto& [angle, u] : keyed) r.push_back(u);
  }
  return rot;
}

// Closes every corner (u1, v, u2) of consecutive rotation neighbours with a
// chord until no corner is open.
inline EmbeddedGraph complete_to_edge_maximal(EmbeddedGraph g) {
  if (!g.graph().connected()) throw PreconditionError("complete_to_edge_maximal: graph is disconnected");
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex v : g.graph().vertices()) {
      for (std::size_t i = 0; i < g.rotation(v).size(); ++i) {
        const auto& r = g.rotation(v);
        if (r.size() < 2) break;
        Vertex u1 = r[i];
        Vertex u2 = r[(i + 1) % r.size()];
        if (u1 == u2 || g.graph().has_edge(u1, u2)) continue;
        g.add_chord(u1, v, u2);
        changed = true;
      }
    }
  }
  return g;
}

// Edge-maximality check: consecutive rotation neighbours are adjacent.
inline bool consecutive_neighbours_adjacent(const EmbeddedGraph& g) {
  for (const auto& [v, r] : g.rotation()) {
    if (r.size() < 2) continue;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!g.graph().has_edge(r[i], r[(i + 1) % r.size()])) return false;
  }
  return true;
}

struct DegeneracyOrdering {
  std::vector<Vertex> order;  // v1..vn
  std::size_t q = 0;
};

// Min-degree peel (ties to the smallest id); peeled vertices go to the back.
inline DegeneracyOrdering degeneracy_ordering(const SimpleGraph& g) {
  std::map<Vertex, std::size_t> deg;
  std::set<std::pair<std::size_t, Vertex>> queue;
  for (const auto& [v, nb] : g.adjacency()) {
    deg[v] = nb.size();
    queue.emplace(nb.size(), v);
  }
  std::set<Vertex> removed;
  std::vector<Vertex> peel;
  std::size_t q = 0;
  while (!queue.empty()) {
    auto [d, v] = *queue.begin();
    queue.erase(queue.begin());
    q = std::max(q, d);
    peel.push_back(v);
    removed.insert(v);
    for (Vertex u : g.neighbours(v)) {
      if (removed.count(u)) continue;
      queue.erase({deg[u], u});
      --deg[u];
      queue.emplace(deg[u], u);
    }
  }
  std::reverse(peel.begin(), peel.end());
  return {std::move(peel), q};
}

// Largest number of earlier neighbours over the ordering.
inline std::size_t max_back_degree(const SimpleGraph& g, const std::vector<Vertex>& order) {
  std::set<Vertex> before;
  std::size_t worst = 0;
  for (Vertex v : order) {
    std::size_t back = 0;
    for (Vertex u : g.neighbours(v)) back += before.count(u);
    worst = std::max(worst, back);
    before.insert(v);
  }
  return worst;
}

}  // namespace sigma
