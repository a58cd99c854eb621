#pragma once

#include <map>
#include <set>

#include "graph.hpp"

namespace sigma {

using ListAssignment = std::map<Vertex, std::set<Colour>>;  // L(v)
using Colouring = std::map<Vertex, Colour>;                 // c(v)
using EdgeLists = std::map<EdgeId, std::set<Colour>>;       // L(e)
using EdgeColouring = std::map<EdgeId, Colour>;

// Per-edge reals: marginals x_e or activities λ_e.
template <class Real>
using EdgeVector = std::map<EdgeId, Real>;

// Colours first..first+size-1 on every vertex.
inline ListAssignment uniform_lists(const SimpleGraph& g, std::size_t size, Colour first = 1) {
  ListAssignment l;
  for (Vertex v : g.vertices())
    for (std::size_t i = 0; i < size; ++i) l[v].insert(first + static_cast<Colour>(i));
  return l;
}

inline EdgeLists uniform_edge_lists(const Multigraph& h, std::size_t size, Colour first = 1) {
  EdgeLists l;
  for (EdgeId e : h.edge_ids())
    for (std::size_t i = 0; i < size; ++i) l[e].insert(first + static_cast<Colour>(i));
  return l;
}

}  // namespace sigma
