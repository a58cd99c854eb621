#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "colouring.hpp"
#include "discharge.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "lists.hpp"
#include "matching_instance.hpp"
#include "sigma_system.hpp"

namespace sigma {

class NotReducible : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

enum class MoveKind { Chord, SingleContraction, DoubleContraction };

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Chord: return "chord";
    case MoveKind::SingleContraction: return "single-contraction";
    case MoveKind::DoubleContraction: return "double-contraction";
  }
  return "?";
}

struct ReductionMove {
  MoveKind kind;
  Vertex y;
  std::set<Vertex> neighbours;                        // N(y) when y was removed
  Vertex target = -1;                                 // u (contractions)
  Vertex other = -1;                                  // u′ (double contraction)
  std::vector<std::pair<Vertex, Vertex>> added_edges;  // edges created by the move
};

struct ReducedInstance {
  EmbeddedGraph g0;
  SigmaSystem sigma0;
  std::vector<ReductionMove> trace;
  std::set<Vertex> X, Y;
};

// y ∈ Σ(x₁) ∩ Σ(x₂) for X^y = {x₁, x₂}; returns the first y that fails.
inline std::optional<Vertex> claim_violation(const SimpleGraph& g, const SigmaSystem& s, const StructureWitness& w) {
  for (Vertex y : w.Y)
    for (Vertex x : g.neighbours(y))
      if (w.X.count(x) && !s.of(x).count(y)) return y;
  return std::nullopt;
}

// G₀ and Σ₀: Y′ vertices become chords x₁x₂, vertices with one outside
// neighbour u are contracted into u, vertices with two outside neighbours
// u < u′ are contracted into u with u added to Σ(u′). Processed in that
// order, ascending ids within each class.
inline ReducedInstance build_reduced_instance(const EmbeddedGraph& g, const SigmaSystem& s, const StructureWitness& w,
                                              long beta) {
  const auto& G = g.graph();
  if (w.kind != StructureKind::S3 || w.Y.empty()) throw NotReducible("not a reducible witness: no S3 structure");
  auto report = validate_witness(G, w, w.zeta);
  if (!report.valid) throw NotReducible("not a reducible witness: " + report.violations.front());
  s.validate(G);
  if (auto y = claim_violation(G, s, w))
    throw NotReducible("not a reducible witness: " + vstr(*y) + " is missing from the Sigma-set of an X-neighbour");

  std::vector<Vertex> prime, single, twice;
  std::map<Vertex, std::vector<Vertex>> outside;
  for (Vertex y : w.Y) {
    for (Vertex u : G.neighbours(y))
      if (!w.X.count(u) && !w.Y.count(u)) outside[y].push_back(u);
    switch (outside[y].size()) {
      case 0: prime.push_back(y); break;
      case 1: single.push_back(y); break;
      default: twice.push_back(y); break;
    }
  }

  ReducedInstance r{g, s, {}, w.X, w.Y};
  std::set<Vertex> targets;
  auto xs_of = [&](Vertex y) {
    std::vector<Vertex> xs;
    for (Vertex u : G.neighbours(y))
      if (w.X.count(u)) xs.push_back(u);
    return xs;
  };

  for (Vertex y : prime) {
    auto xs = xs_of(y);
    ReductionMove m{MoveKind::Chord, y, r.g0.graph().neighbours(y), -1, -1, {}};
    if (!r.g0.graph().has_edge(xs[0], xs[1])) m.added_edges.emplace_back(xs[0], xs[1]);
    r.g0.delete_vertex(y, std::pair{xs[0], xs[1]});
    r.sigma0.erase(xs[0], y);
    r.sigma0.erase(xs[1], y);
    r.sigma0.insert(xs[0], xs[1]);
    r.sigma0.insert(xs[1], xs[0]);
    r.sigma0.remove_vertex(y);
    r.trace.push_back(std::move(m));
  }
  auto contract = [&](Vertex y, MoveKind kind, Vertex u, Vertex u2) {
    ReductionMove m{kind, y, r.g0.graph().neighbours(y), u, u2, {}};
    for (Vertex gained : r.g0.contract(u, y)) m.added_edges.emplace_back(u, gained);
    for (Vertex x : xs_of(y)) r.sigma0.erase(x, y);
    if (kind == MoveKind::DoubleContraction) {
      r.sigma0.erase(u2, y);
      r.sigma0.insert(u2, u);
    }
    r.sigma0.remove_vertex(y);
    targets.insert(u);
    r.trace.push_back(std::move(m));
  };
  for (Vertex y : single) contract(y, MoveKind::SingleContraction, outside[y][0], -1);
  for (Vertex y : twice) contract(y, MoveKind::DoubleContraction, outside[y][0], outside[y][1]);
  for (Vertex u : targets) r.sigma0.set(u, r.g0.graph().neighbours(u));

  r.sigma0.validate(r.g0.graph());
  for (const auto& [v, set] : r.sigma0.sets())
    if (static_cast<long>(set.size()) > beta)
      throw InvariantError("Sigma0(" + vstr(v) + ") has " + std::to_string(set.size()) + " elements, above beta = " +
                           std::to_string(beta));
  return r;
}

// Undoes the trace on the abstract graph: G is recovered from G₀.
inline SimpleGraph replay_trace(const SimpleGraph& g0, const std::vector<ReductionMove>& trace) {
  SimpleGraph g = g0;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    for (auto [a, b] : it->added_edges) g.remove_edge(a, b);
    g.add_vertex(it->y);
    for (Vertex u : it->neighbours) g.add_edge(it->y, u);
  }
  return g;
}

struct MatchingBuild {
  MatchingInstance instance;
  std::map<EdgeId, std::size_t> forbidden;  // number of forbidden colours removed per edge
  bool size_bound_ok = true;
  bool density_ok = true;
  bool density_sampled = false;
  std::vector<std::string> notes;
};

// First Σ-conflict among coloured vertices outside `skip`, or nullopt.
inline std::optional<std::string> partial_defect(const SimpleGraph& g, const SigmaSystem& s, const Colouring& c,
                                                 const ListAssignment& lists, const std::set<Vertex>& skip) {
  for (Vertex v : g.vertices()) {
    if (skip.count(v)) continue;
    auto it = c.find(v);
    if (it == c.end()) return "vertex " + vstr(v) + " is uncoloured";
    auto l = lists.find(v);
    if (l == lists.end() || !l->second.count(it->second)) return "vertex " + vstr(v) + " coloured outside its list";
  }
  auto cg = conflict_graph(g, s);
  for (auto [u, v] : cg.base.edges()) {
    if (skip.count(u) || skip.count(v)) continue;
    if (c.at(u) == c.at(v)) {
      const auto& why = cg.why(u, v);
      return "conflict " + vstr(u) + "-" + vstr(v) + " (" +
             (why.adjacency ? std::string("adjacent") : "both in Sigma(" + vstr(why.witness) + ")") + ")";
    }
  }
  return std::nullopt;
}

// H on the X-vertices with Y-neighbours, one edge e_y (id y) per y ∈ Y,
// L(e_y) = L(y) minus the colours of {x₁,x₂} ∪ ((Z ∪ N(Z))∖Y) ∪ ((Σ(x₁) ∪ Σ(x₂))∖Y).
inline MatchingBuild build_matching_instance(const SimpleGraph& g, const SigmaSystem& s, const StructureWitness& w,
                                             const Colouring& partial, const ListAssignment& lists) {
  if (auto d = partial_defect(g, s, partial, lists, w.Y)) throw PreconditionError("invalid partial colouring: " + *d);
  MatchingBuild b;
  auto& mi = b.instance;
  for (Vertex y : w.Y) {
    std::vector<Vertex> xs;
    for (Vertex u : g.neighbours(y))
      if (w.X.count(u)) xs.push_back(u);
    if (xs.size() != 2) throw PreconditionError("Y-vertex " + vstr(y) + " does not have two X-neighbours");
    mi.h.add_edge(xs[0], xs[1], y);
    mi.origin[y] = y;
  }
  auto deg = mi.h.degrees();
  for (Vertex x : mi.h.vertices()) mi.sigma[x] = static_cast<long>(s.sigma(x));

  for (Vertex y : w.Y) {
    const auto& e = mi.h.edge(y);
    std::set<Vertex> forbid{e.u, e.v};
    for (Vertex z : g.neighbours(y)) {
      if (w.X.count(z)) continue;
      if (!w.Y.count(z)) forbid.insert(z);
      for (Vertex t : g.neighbours(z))
        if (!w.Y.count(t)) forbid.insert(t);
    }
    for (Vertex x : {e.u, e.v})
      for (Vertex t : s.of(x))
        if (!w.Y.count(t)) forbid.insert(t);
    std::set<Colour> used;
    for (Vertex t : forbid) used.insert(partial.at(t));
    std::set<Colour> list;
    for (Colour a : lists.at(y))
      if (!used.count(a)) list.insert(a);
    b.forbidden[y] = lists.at(y).size() - list.size();
    const long bound = static_cast<long>(lists.at(y).size()) - 10 - (mi.sigma[e.u] - static_cast<long>(deg[e.u])) -
                       (mi.sigma[e.v] - static_cast<long>(deg[e.v]));
    if (static_cast<long>(list.size()) < bound) {
      b.size_bound_ok = false;
      b.notes.push_back("list of e_" + vstr(y) + " below the size bound");
    }
    mi.lists[y] = std::move(list);
  }

  // Σ_{w∈W}(σ(w) − d_H(w)) ≤ e_H(W, X∖W) + ζ|W|.
  std::vector<Vertex> xs(mi.h.vertices().begin(), mi.h.vertices().end());
  if (xs.size() <= 20) {
    std::map<Vertex, std::size_t> idx;
    for (std::size_t i = 0; i < xs.size(); ++i) idx[xs[i]] = i;
    for (std::uint64_t mask = 1; mask < (1ULL << xs.size()) && b.density_ok; ++mask) {
      long lhs = 0, cut = 0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if ((mask >> i) & 1ULL) lhs += mi.sigma[xs[i]] - static_cast<long>(deg[xs[i]]);
      for (const auto& e : mi.h.edges()) cut += (((mask >> idx[e.u]) ^ (mask >> idx[e.v])) & 1ULL) ? 1 : 0;
      if (lhs > cut + w.zeta * std::popcount(mask)) {
        b.density_ok = false;
        b.notes.push_back("density condition fails on a subset of X");
      }
    }
  } else {
    b.density_sampled = true;
  }
  return b;
}

// y takes the colour of e_y.
inline Colouring extend_colouring(const Colouring& partial, const EdgeColouring& h_colouring,
                                  const std::map<EdgeId, Vertex>& origin) {
  Colouring c = partial;
  for (const auto& [e, y] : origin) {
    auto it = h_colouring.find(e);
    if (it == h_colouring.end()) throw PreconditionError("edge " + std::to_string(e) + " is uncoloured");
    c[y] = it->second;
  }
  return c;
}

// Extension followed by the global validator; a conflict here is a bug.
inline Colouring extend_and_validate(const SimpleGraph& g, const SigmaSystem& s, const ListAssignment& lists,
                                     const Colouring& partial, const MatchingInstance& mi, const EdgeColouring& hc) {
  if (auto d = edge_colouring_defect(mi.h, mi.lists, hc)) throw PreconditionError("edge colouring of H: " + *d);
  Colouring c = extend_colouring(partial, hc, mi.origin);
  if (auto d = colouring_defect(g, s, c, &lists)) throw InvariantError("extension produced " + *d);
  return c;
}

}  // namespace sigma
