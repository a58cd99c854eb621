#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace sigma {

// Sparse Σ-system: v -> Σ(v) ⊆ N(v). Vertices without an entry have Σ(v) = ∅.
class SigmaSystem {
 public:
  using Sets = std::map<Vertex, std::set<Vertex>>;

  SigmaSystem() = default;
  explicit SigmaSystem(Sets sets) {
    for (auto& [v, s] : sets)
      if (!s.empty()) sets_.emplace(v, std::move(s));
  }

  // Σ ≡ N_G: Σ-colouring is colouring of the square.
  static SigmaSystem neighbourhoods(const SimpleGraph& g) {
    Sets s;
    for (const auto& [v, nb] : g.adjacency()) s[v] = nb;
    return SigmaSystem(std::move(s));
  }

  const std::set<Vertex>& of(Vertex v) const {
    static const std::set<Vertex> empty;
    auto it = sets_.find(v);
    return it == sets_.end() ? empty : it->second;
  }

  std::size_t sigma(Vertex v) const { return of(v).size(); }

  void set(Vertex v, std::set<Vertex> s) {
    if (s.empty())
      sets_.erase(v);
    else
      sets_[v] = std::move(s);
  }

  void insert(Vertex v, Vertex u) { sets_[v].insert(u); }

  void erase(Vertex v, Vertex u) {
    auto it = sets_.find(v);
    if (it == sets_.end()) return;
    it->second.erase(u);
    if (it->second.empty()) sets_.erase(it);
  }

  // Drops v as an owner and from every set.
  void remove_vertex(Vertex v) {
    sets_.erase(v);
    for (auto it = sets_.begin(); it != sets_.end();) {
      it->second.erase(v);
      it = it->second.empty() ? sets_.erase(it) : std::next(it);
    }
  }

  // β = Δ(G;Σ) = max |Σ(v)|, 0 when every set is empty.
  std::size_t beta() const {
    std::size_t b = 0;
    for (const auto& [v, s] : sets_) b = std::max(b, s.size());
    return b;
  }

  const Sets& sets() const { return sets_; }

  void validate(const SimpleGraph& g) const {
    for (const auto& [v, s] : sets_) {
      if (!g.has_vertex(v)) throw ValidationError("Σ defined for unknown vertex " + vstr(v));
      for (Vertex u : s)
        if (!g.has_edge(v, u))
          throw ValidationError("Σ(" + vstr(v) + ") contains " + vstr(u) + ", which is not a neighbour");
    }
  }

  // True when no vertex belongs to two different Σ-sets.
  bool pairwise_disjoint() const {
    std::set<Vertex> seen;
    for (const auto& [v, s] : sets_)
      for (Vertex u : s)
        if (!seen.insert(u).second) return false;
    return true;
  }

  friend bool operator==(const SigmaSystem&, const SigmaSystem&) = default;

 private:
  Sets sets_;
};

// Why two vertices conflict: an edge of G, or co-membership in Σ(witness).
struct ConflictOrigin {
  bool adjacency = false;
  Vertex witness = -1;

  friend bool operator==(const ConflictOrigin&, const ConflictOrigin&) = default;
};

struct ConflictGraph {
  SimpleGraph base;
  std::map<std::pair<Vertex, Vertex>, ConflictOrigin> origin;  // key (min, max)

  const ConflictOrigin& why(Vertex u, Vertex v) const { return origin.at({std::min(u, v), std::max(u, v)}); }
};

// Adjacency is preferred as the justification; otherwise the smallest witness t.
inline ConflictGraph conflict_graph(const SimpleGraph& g, const SigmaSystem& s) {
  s.validate(g);
  ConflictGraph cg;
  for (Vertex v : g.vertices()) cg.base.add_vertex(v);
  for (auto [u, v] : g.edges()) {
    cg.base.add_edge(u, v);
    cg.origin[{u, v}] = ConflictOrigin{true, -1};
  }
  for (const auto& [t, set] : s.sets()) {
    for (auto a = set.begin(); a != set.end(); ++a)
      for (auto b = std::next(a); b != set.end(); ++b) {
        cg.base.add_edge(*a, *b);
        cg.origin.try_emplace({*a, *b}, ConflictOrigin{false, t});
      }
  }
  return cg;
}

// d^Σ(v): number of Σ-neighbours of v.
inline std::size_t sigma_degree(const SimpleGraph& g, const SigmaSystem& s, Vertex v) {
  if (!g.has_vertex(v)) throw PreconditionError("unknown vertex " + vstr(v));
  std::set<Vertex> nb = g.neighbours(v);
  for (const auto& [t, set] : s.sets())
    if (set.count(v))
      for (Vertex u : set)
        if (u != v) nb.insert(u);
  return nb.size();
}

// Upper bound d(v) + Σ_{t: v ∈ Σ(t)} (σ(t) − 1).
inline std::size_t sigma_degree_bound(const SimpleGraph& g, const SigmaSystem& s, Vertex v) {
  std::size_t b = g.degree(v);
  for (const auto& [t, set] : s.sets())
    if (set.count(v)) b += set.size() - 1;
  return b;
}

// G²: vertices at distance 1 or 2.
inline SimpleGraph square(const SimpleGraph& g) {
  SimpleGraph sq;
  for (const auto& [v, nb] : g.adjacency()) {
    sq.add_vertex(v);
    for (Vertex u : nb) {
      sq.add_edge(v, u);
      for (Vertex w : g.neighbours(u))
        if (w != v) sq.add_edge(v, w);
    }
  }
  return sq;
}

}  // namespace sigma
