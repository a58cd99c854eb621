#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "graph.hpp"
#include "sigma_system.hpp"

namespace sigma {

// Dense bitset over vertex indices, used by the search kernels.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(std::size_t i) { w_[i >> 6] |= (1ULL << (i & 63)); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool none() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }

  // Lowest set index, or size() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return n_;
  }
  std::size_t next(std::size_t i) const {
    ++i;
    if (i >= n_) return n_;
    std::size_t k = i >> 6;
    std::uint64_t x = w_[k] & (~0ULL << (i & 63));
    while (true) {
      if (x) return k * 64 + static_cast<std::size_t>(std::countr_zero(x));
      if (++k >= w_.size()) return n_;
      x = w_[k];
    }
  }

  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  Bits& and_not(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct DenseGraph {
  std::vector<Vertex> ids;  // index -> vertex id, ascending
  std::vector<Bits> adj;

  explicit DenseGraph(const SimpleGraph& g) : ids(g.vertices()) {
    std::map<Vertex, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    adj.assign(ids.size(), Bits(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (Vertex u : g.neighbours(ids[i])) adj[i].set(index.at(u));
  }
};

struct CliqueResult {
  std::size_t size = 0;
  std::vector<Vertex> witness;  // sorted
  bool exact = true;            // false: budget hit, size is a lower bound
  std::uint64_t nodes = 0;
};

namespace detail {

// Greedy colouring bound on the candidate set.
inline std::size_t colour_bound(const DenseGraph& g, Bits cand) {
  std::size_t colours = 0;
  while (!cand.none()) {
    ++colours;
    Bits q = cand;
    for (std::size_t v = q.first(); v < q.size(); v = q.next(v)) {
      cand.reset(v);
      q.and_not(g.adj[v]);
    }
  }
  return colours;
}

struct CliqueSearch {
  const DenseGraph& g;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool aborted = false;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  // Candidates are explored in ascending index order and only strictly larger
  // cliques replace the incumbent, so the first maximum found is the
  // lexicographically least one.
  void expand(Bits cand) {
    if (aborted) return;
    if (++nodes > budget) {
      aborted = true;
      return;
    }
    if (cand.none()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + colour_bound(g, cand) <= best.size()) return;
    for (std::size_t v = cand.first(); v < cand.size(); v = cand.next(v)) {
      if (current.size() + cand.count() <= best.size()) return;
      current.push_back(v);
      Bits next = cand & g.adj[v];
      // Restrict to indices above v to enumerate each clique once.
      for (std::size_t u = next.first(); u < next.size() && u <= v; u = next.next(u)) next.reset(u);
      expand(next);
      current.pop_back();
      if (aborted) return;
      cand.reset(v);
    }
  }
};

}  // namespace detail

// Exact maximum clique by branch and bound with a greedy-colouring bound.
inline CliqueResult max_clique(const SimpleGraph& g, std::uint64_t node_budget = 50'000'000) {
  DenseGraph dg(g);
  Bits all(dg.ids.size());
  for (std::size_t i = 0; i < dg.ids.size(); ++i) all.set(i);
  detail::CliqueSearch search{dg, node_budget, 0, false, {}, {}};
  search.expand(all);
  CliqueResult r;
  r.exact = !search.aborted;
  r.nodes = search.nodes;
  for (auto i : search.best) r.witness.push_back(dg.ids[i]);
  r.size = r.witness.size();
  return r;
}

// ω(G;Σ) with a witness; a budget overrun yields a lower bound flagged inexact.
inline CliqueResult sigma_clique_number(const SimpleGraph& g, const SigmaSystem& s,
                                        std::uint64_t node_budget = 50'000'000) {
  return max_clique(conflict_graph(g, s).base, node_budget);
}

inline bool is_clique(const SimpleGraph& g, const std::vector<Vertex>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!g.has_edge(vs[i], vs[j])) return false;
  return true;
}

}  // namespace sigma
