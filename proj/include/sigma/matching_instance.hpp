#pragma once

#include <map>
#include <optional>
#include <string>

#include "graph.hpp"
#include "lists.hpp"

namespace sigma {

// Multigraph H with per-edge lists L(e), integers σ(x), and e_y -> y.
struct MatchingInstance {
  Multigraph h;
  EdgeLists lists;
  std::map<Vertex, long> sigma;
  std::map<EdgeId, Vertex> origin;

  friend bool operator==(const MatchingInstance&, const MatchingInstance&) = default;
};

// First defect of a list edge-colouring, or nullopt when it is proper and
// every edge is coloured from its own list.
inline std::optional<std::string> edge_colouring_defect(const Multigraph& h, const EdgeLists& lists,
                                                        const EdgeColouring& c) {
  for (const auto& e : h.edges()) {
    auto it = c.find(e.id);
    if (it == c.end()) return "edge " + std::to_string(e.id) + " is uncoloured";
    auto lit = lists.find(e.id);
    if (lit == lists.end() || !lit->second.count(it->second))
      return "edge " + std::to_string(e.id) + " coloured " + std::to_string(it->second) + " outside its list";
  }
  for (Vertex v : h.vertices()) {
    std::map<Colour, EdgeId> seen;
    for (EdgeId e : h.incident(v)) {
      auto [pos, fresh] = seen.emplace(c.at(e), e);
      if (!fresh)
        return "edges " + std::to_string(pos->second) + " and " + std::to_string(e) + " share colour " +
               std::to_string(c.at(e)) + " at vertex " + vstr(v);
    }
  }
  for (const auto& [id, col] : c)
    if (!h.has_edge(id)) return "colour given for unknown edge " + std::to_string(id);
  return std::nullopt;
}

}  // namespace sigma
