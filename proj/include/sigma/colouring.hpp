#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clique.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "lists.hpp"
#include "sigma_system.hpp"

namespace sigma {

// First defect of a Σ-colouring (uncoloured vertex, colour outside its list,
// or a monochromatic conflict with its origin), or nullopt when valid.
inline std::optional<std::string> colouring_defect(const SimpleGraph& g, const SigmaSystem& s, const Colouring& c,
                                                   const ListAssignment* lists = nullptr) {
  for (Vertex v : g.vertices()) {
    auto it = c.find(v);
    if (it == c.end()) return "vertex " + vstr(v) + " is uncoloured";
    if (lists) {
      auto l = lists->find(v);
      if (l == lists->end() || !l->second.count(it->second))
        return "vertex " + vstr(v) + " coloured " + std::to_string(it->second) + " outside its list";
    }
  }
  for (const auto& [v, col] : c)
    if (!g.has_vertex(v)) return "colour given for unknown vertex " + vstr(v);
  auto cg = conflict_graph(g, s);
  for (auto [u, v] : cg.base.edges())
    if (c.at(u) == c.at(v)) {
      const auto& why = cg.why(u, v);
      return "conflict " + vstr(u) + "-" + vstr(v) + " (" +
             (why.adjacency ? std::string("adjacent") : "both in Sigma(" + vstr(why.witness) + ")") +
             ") shares colour " + std::to_string(c.at(u));
    }
  return std::nullopt;
}

inline bool is_valid_colouring(const SimpleGraph& g, const SigmaSystem& s, const Colouring& c,
                               const ListAssignment* lists = nullptr) {
  return !colouring_defect(g, s, c, lists);
}

struct GreedyResult {
  bool success = false;
  Colouring colouring;
  std::optional<Vertex> failed_at;
};

// Colours vertices in `order`, each with the smallest list colour unused by
// its coloured Σ-neighbours.
inline GreedyResult greedy_sigma_colouring(const SimpleGraph& g, const SigmaSystem& s, const ListAssignment& lists,
                                           const std::vector<Vertex>& order) {
  auto cg = conflict_graph(g, s).base;
  GreedyResult r;
  for (Vertex v : order) {
    std::set<Colour> used;
    for (Vertex u : cg.neighbours(v))
      if (auto it = r.colouring.find(u); it != r.colouring.end()) used.insert(it->second);
    std::optional<Colour> pick;
    if (auto l = lists.find(v); l != lists.end())
      for (Colour a : l->second)
        if (!used.count(a)) {
          pick = a;
          break;
        }
    if (!pick) {
      r.failed_at = v;
      return r;
    }
    r.colouring[v] = *pick;
  }
  r.success = r.colouring.size() == g.order();
  return r;
}

inline GreedyResult greedy_sigma_colouring(const SimpleGraph& g, const SigmaSystem& s, const ListAssignment& lists,
                                           const DegeneracyOrdering& order) {
  return greedy_sigma_colouring(g, s, lists, order.order);
}

// ---- generic list-colouring search ----------------------------------------

enum class SearchStatus { Found, Infeasible, Unknown };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Infeasible: return "infeasible";
    case SearchStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace detail {

// Backtracking list colouring of an abstract conflict structure: picks the
// item with the fewest live colours (ties: higher static priority), tries
// colours in ascending order, forward-checks neighbours.
struct ListSearch {
  const std::vector<std::vector<std::size_t>>& adj;
  std::vector<std::vector<Colour>> lists;
  std::vector<long> priority;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool aborted = false;
  std::vector<std::optional<Colour>> colour;
  std::vector<std::map<Colour, int>> blocked;  // colour -> number of coloured neighbours using it

  std::size_t live(std::size_t i) const {
    std::size_t n = 0;
    for (Colour a : lists[i])
      if (!blocked[i].count(a)) ++n;
    return n;
  }

  bool solve() {
    if (++nodes > budget) {
      aborted = true;
      return false;
    }
    std::optional<std::size_t> pick;
    std::size_t pick_live = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      if (colour[i]) continue;
      std::size_t l = live(i);
      if (!pick || l < pick_live || (l == pick_live && priority[i] > priority[*pick])) {
        pick = i;
        pick_live = l;
      }
    }
    if (!pick) return true;
    if (pick_live == 0) return false;
    const std::size_t v = *pick;
    for (Colour a : lists[v]) {
      if (blocked[v].count(a)) continue;
      colour[v] = a;
      bool dead = false;
      for (auto u : adj[v]) {
        if (!colour[u] && ++blocked[u][a] == 1 && live(u) == 0) dead = true;
      }
      if (!dead && solve()) return true;
      for (auto u : adj[v]) {
        if (colour[u]) continue;
        if (--blocked[u][a] == 0) blocked[u].erase(a);
      }
      colour[v].reset();
      if (aborted) return false;
    }
    return false;
  }
};

}  // namespace detail

struct ListColouringResult {
  SearchStatus status = SearchStatus::Unknown;
  Colouring colouring;
  std::uint64_t nodes = 0;
};

// Exact list Σ-colouring by backtracking on the conflict graph.
inline ListColouringResult exact_list_colouring(const SimpleGraph& g, const SigmaSystem& s, const ListAssignment& lists,
                                                std::uint64_t node_budget = 2'000'000) {
  auto cg = conflict_graph(g, s).base;
  auto ids = cg.vertices();
  std::map<Vertex, std::size_t> idx;
  for (std::size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = i;
  std::vector<std::vector<std::size_t>> adj(ids.size());
  std::vector<std::vector<Colour>> ls(ids.size());
  std::vector<long> prio(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (Vertex u : cg.neighbours(ids[i])) adj[i].push_back(idx[u]);
    if (auto it = lists.find(ids[i]); it != lists.end()) ls[i].assign(it->second.begin(), it->second.end());
    prio[i] = static_cast<long>(adj[i].size());
  }
  detail::ListSearch search{adj, ls, prio, node_budget, 0, false, std::vector<std::optional<Colour>>(ids.size()),
                            std::vector<std::map<Colour, int>>(ids.size())};
  ListColouringResult r;
  bool ok = search.solve();
  r.nodes = search.nodes;
  if (ok) {
    r.status = SearchStatus::Found;
    for (std::size_t i = 0; i < ids.size(); ++i) r.colouring[ids[i]] = *search.colour[i];
  } else {
    r.status = search.aborted ? SearchStatus::Unknown : SearchStatus::Infeasible;
  }
  return r;
}

struct EdgeListColouringResult {
  SearchStatus status = SearchStatus::Unknown;
  EdgeColouring colouring;
  std::uint64_t nodes = 0;
};

// Exact list edge-colouring of a multigraph; edges of larger degree first.
inline EdgeListColouringResult exact_list_edge_colouring(const Multigraph& h, const EdgeLists& lists,
                                                         std::uint64_t node_budget = 2'000'000) {
  auto ids = h.edge_ids();
  std::map<EdgeId, std::size_t> idx;
  for (std::size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = i;
  auto deg = h.degrees();
  std::vector<std::vector<std::size_t>> adj(ids.size());
  std::vector<std::vector<Colour>> ls(ids.size());
  std::vector<long> prio(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& e = h.edge(ids[i]);
    std::set<std::size_t> nb;
    for (Vertex v : {e.u, e.v})
      for (EdgeId f : h.incident(v))
        if (f != ids[i]) nb.insert(idx[f]);
    adj[i].assign(nb.begin(), nb.end());
    if (auto it = lists.find(ids[i]); it != lists.end()) ls[i].assign(it->second.begin(), it->second.end());
    prio[i] = static_cast<long>(deg[e.u] + deg[e.v]);
  }
  detail::ListSearch search{adj, ls, prio, node_budget, 0, false, std::vector<std::optional<Colour>>(ids.size()),
                            std::vector<std::map<Colour, int>>(ids.size())};
  EdgeListColouringResult r;
  bool ok = search.solve();
  r.nodes = search.nodes;
  if (ok) {
    r.status = SearchStatus::Found;
    for (std::size_t i = 0; i < ids.size(); ++i) r.colouring[ids[i]] = *search.colour[i];
  } else {
    r.status = search.aborted ? SearchStatus::Unknown : SearchStatus::Infeasible;
  }
  return r;
}

// ---- exact chromatic number ----------------------------------------------

struct ChromaticResult {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool exact = false;
  Colouring witness;  // uses colours 1..upper
};

namespace detail {

// DSATUR greedy on a dense graph; returns colours 1..k per index.
inline std::vector<int> dsatur(const DenseGraph& g) {
  const std::size_t n = g.ids.size();
  std::vector<int> col(n, 0);
  std::vector<std::set<int>> sat(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i]) continue;
      if (!pick || sat[i].size() > sat[*pick].size() ||
          (sat[i].size() == sat[*pick].size() && g.adj[i].count() > g.adj[*pick].count()))
        pick = i;
    }
    int c = 1;
    while (sat[*pick].count(c)) ++c;
    col[*pick] = c;
    for (std::size_t u = g.adj[*pick].first(); u < n; u = g.adj[*pick].next(u)) sat[u].insert(c);
  }
  return col;
}

// k-colourability by DSATUR backtracking; a new colour is only opened as
// max-used + 1, which removes colour-permutation symmetry.
struct KColour {
  const DenseGraph& g;
  std::size_t k;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool aborted = false;
  std::vector<int> col;

  bool solve(std::size_t coloured, int max_used) {
    if (++nodes > budget) {
      aborted = true;
      return false;
    }
    const std::size_t n = g.ids.size();
    if (coloured == n) return true;
    std::optional<std::size_t> pick;
    std::size_t best_sat = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i]) continue;
      std::set<int> s;
      for (std::size_t u = g.adj[i].first(); u < n; u = g.adj[i].next(u))
        if (col[u]) s.insert(col[u]);
      if (!pick || s.size() > best_sat) {
        pick = i;
        best_sat = s.size();
      }
    }
    const std::size_t v = *pick;
    const int limit = std::min<int>(static_cast<int>(k), max_used + 1);
    for (int c = 1; c <= limit; ++c) {
      bool clash = false;
      for (std::size_t u = g.adj[v].first(); u < n && !clash; u = g.adj[v].next(u)) clash = col[u] == c;
      if (clash) continue;
      col[v] = c;
      if (solve(coloured + 1, std::max(max_used, c))) return true;
      col[v] = 0;
      if (aborted) return false;
    }
    return false;
  }
};

}  // namespace detail

// χ(G;Σ) = χ(conflict graph): clique lower bound, DSATUR upper bound, then
// exact k-colourability tests upward from the lower bound.
inline ChromaticResult exact_sigma_chromatic(const SimpleGraph& g, const SigmaSystem& s, std::size_t vertex_limit = 40,
                                             std::uint64_t node_budget = 20'000'000) {
  auto cg = conflict_graph(g, s).base;
  DenseGraph dg(cg);
  ChromaticResult r;
  if (dg.ids.empty()) {
    r.exact = true;
    return r;
  }
  auto clique = max_clique(cg, node_budget);
  r.lower = clique.size;
  auto greedy = detail::dsatur(dg);
  r.upper = static_cast<std::size_t>(*std::max_element(greedy.begin(), greedy.end()));
  for (std::size_t i = 0; i < greedy.size(); ++i) r.witness[dg.ids[i]] = greedy[i];
  if (dg.ids.size() > vertex_limit) return r;
  while (r.lower < r.upper) {
    detail::KColour kc{dg, r.upper - 1, node_budget, 0, false, std::vector<int>(dg.ids.size(), 0)};
    if (kc.solve(0, 0)) {
      r.upper -= 1;
      r.witness.clear();
      for (std::size_t i = 0; i < kc.col.size(); ++i) r.witness[dg.ids[i]] = kc.col[i];
      r.upper = 0;
      for (const auto& [v, c] : r.witness) r.upper = std::max<std::size_t>(r.upper, static_cast<std::size_t>(c));
    } else if (kc.aborted) {
      return r;
    } else {
      r.lower = r.upper;
    }
  }
  r.exact = r.lower == r.upper;
  return r;
}

}  // namespace sigma
