#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "sigma/sigma.hpp"

namespace fixtures {

using namespace sigma;

inline Multigraph shannon(int mu) {
  Multigraph h;
  for (int i = 0; i < mu; ++i) {
    h.add_edge(0, 1);
    h.add_edge(1, 2);
    h.add_edge(0, 2);
  }
  return h;
}

inline Multigraph from_pairs(const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  Multigraph h;
  for (auto [u, v] : pairs) h.add_edge(u, v);
  return h;
}

// Canonical form under vertex relabelling (desk scale only: n ≤ 6).
inline std::vector<std::pair<int, int>> canonical(const Multigraph& h) {
  std::vector<Vertex> vs(h.vertices().begin(), h.vertices().end());
  std::vector<int> perm(vs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<int, int>> best;
  bool first = true;
  do {
    std::map<Vertex, int> at;
    for (std::size_t i = 0; i < vs.size(); ++i) at[vs[i]] = perm[i];
    std::vector<std::pair<int, int>> form;
    for (const auto& e : h.edges()) form.emplace_back(std::min(at[e.u], at[e.v]), std::max(at[e.u], at[e.v]));
    std::sort(form.begin(), form.end());
    form.insert(form.begin(), {static_cast<int>(vs.size()), -1});
    if (first || form < best) best = std::move(form);
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Pairwise non-isomorphic connected multigraphs with at most 5 vertices
// and at most 8 edges: a few named members followed by seeded random ones.
inline std::vector<Multigraph> catalogue(std::size_t count = 60) {
  std::vector<Multigraph> out;
  std::set<std::vector<std::pair<int, int>>> seen;
  auto offer = [&](const Multigraph& h) {
    if (out.size() >= count || !h.connected() || h.edge_count() == 0) return;
    if (seen.insert(canonical(h)).second) out.push_back(h);
  };
  offer(from_pairs({{0, 1}}));
  offer(from_pairs({{0, 1}, {1, 2}}));
  offer(shannon(1));
  offer(shannon(2));
  offer(from_pairs({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  offer(from_pairs({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
  offer(from_pairs({{0, 1}, {0, 1}, {0, 1}}));
  Rng rng(substream(2024, {0xCA7}));
  while (out.size() < count) {
    const auto n = static_cast<Vertex>(uniform_int(rng, 2, 5));
    const auto m = static_cast<std::size_t>(uniform_int(rng, n - 1, 8));
    Multigraph h;
    for (Vertex v = 1; v < n; ++v) h.add_edge(v, static_cast<Vertex>(uniform_below(rng, v)));
    while (h.edge_count() < m) {
      Vertex u = static_cast<Vertex>(uniform_below(rng, n)), v = static_cast<Vertex>(uniform_below(rng, n));
      if (u != v) h.add_edge(u, v);
    }
    offer(h);
  }
  return out;
}

inline EmbeddedGraph random_maximal_planar(std::size_t n, Rng& rng) { return sigma::random_maximal_planar(n, rng); }

inline EmbeddedGraph thin(const EmbeddedGraph& g, double keep, Rng& rng) { return thin_planar(g, keep, rng); }

// Double pyramid over C_m: rim 0..m-1 of degree 4, apexes m and m+1.
inline EmbeddedGraph bipyramid(int m) {
  EmbeddedGraph::Rotation r;
  const Vertex n = m, s = m + 1;
  for (int i = 0; i < m; ++i) r[i] = {(i + 1) % m, n, (i + m - 1) % m, s};
  for (int i = 0; i < m; ++i) r[n].push_back(i);
  for (int i = m - 1; i >= 0; --i) r[s].push_back(i);
  return EmbeddedGraph::from_rotation(std::move(r), 2, true);
}

// Bipyramid with an extra degree-3 vertex in the face (0, 1, apex).
inline EmbeddedGraph stacked_bipyramid(int m) {
  auto r = bipyramid(m).rotation();
  const Vertex n = m, t = m + 2;
  auto after = [&](Vertex at, Vertex u) {
    auto& v = r[at];
    v.insert(std::find(v.begin(), v.end(), u) + 1, t);
  };
  after(0, 1);
  after(n, 0);
  after(1, n);
  r[t] = {0, 1, n};
  auto g = EmbeddedGraph::from_rotation(r, 2, true);
  if (euler_residual(g) != 2) {
    r[t] = {0, n, 1};
    g = EmbeddedGraph::from_rotation(r, 2, true);
  }
  return g;
}

// Hand-built S3 witness on bipyramid(m) with the given Y ⊆ rim.
inline StructureWitness rim_witness(int m, const std::set<Vertex>& Y, long zeta) {
  StructureWitness w;
  w.kind = StructureKind::S3;
  w.zeta = zeta;
  w.X = {m, m + 1};
  w.Y = Y;
  for (Vertex y : Y) w.x_of_y[y] = {m, m + 1};
  return w;
}

inline ListAssignment random_lists(const SimpleGraph& g, std::size_t lo, std::size_t hi, Colour palette, Rng& rng) {
  ListAssignment l;
  for (Vertex v : g.vertices()) {
    const auto size = static_cast<std::size_t>(uniform_int(rng, static_cast<long>(lo), static_cast<long>(hi)));
    std::set<Colour> s;
    while (s.size() < std::min<std::size_t>(size, static_cast<std::size_t>(palette))) s.insert(uniform_int(rng, 1, palette));
    l[v] = std::move(s);
  }
  return l;
}


// Vectors on both sides of the boundary of MP(H): scaled convex
// combinations of matchings, sometimes perturbed, sometimes uniform noise.
inline EdgeVector<Rational> random_vector(const Multigraph& h, Rng& rng) {
  EdgeVector<Rational> x;
  for (EdgeId e : h.edge_ids()) x[e] = 0;
  if (uniform_below(rng, 4) == 0) {
    for (auto& [e, v] : x) v = Rational(uniform_int(rng, 0, 12), 20);
    return x;
  }
  auto ms = enumerate_matchings(h);
  std::vector<long> w(ms.size());
  long total = 0;
  for (auto& wi : w) total += (wi = uniform_int(rng, 0, 6));
  if (total == 0) w[ms.size() - 1] = total = 1;
  const long scale = uniform_int(rng, 7, 13);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (EdgeId e : ms[i]) x[e] += Rational(w[i] * scale, total * 10);
  if (uniform_below(rng, 3) == 0) {
    auto ids = h.edge_ids();
    auto& v = x[ids[uniform_below(rng, ids.size())]];
    v = std::max(Rational(0), v + Rational(uniform_int(rng, -2, 2), 10));
  }
  return x;
}

struct LemmaInstance {
  Multigraph h;
  std::map<Vertex, long> sigma;
  long beta = 0;
  long zeta = 0;
  Rational K;
  EdgeVector<Rational> b;
};

// σ − d ≤ ζ pointwise (so H3′ holds), β ≥ max σ, b on the H2′ threshold plus slack.
inline LemmaInstance random_lemma_instance(const Multigraph& h, Rng& rng) {
  LemmaInstance li;
  li.h = h;
  li.zeta = uniform_int(rng, 0, 4);
  auto deg = h.degrees();
  for (Vertex v : h.vertices()) {
    li.sigma[v] = static_cast<long>(deg[v]) + uniform_int(rng, 0, li.zeta);
    li.beta = std::max(li.beta, li.sigma[v]);
  }
  li.beta += uniform_int(rng, 0, 3);
  li.K = ceil(lemma_k_threshold(Rational(li.zeta)));
  for (const auto& e : h.edges()) {
    Rational need = Rational(3 * li.beta, 2) + li.K - Rational(li.sigma[e.u] - static_cast<long>(deg[e.u])) -
                    Rational(li.sigma[e.v] - static_cast<long>(deg[e.v]));
    li.b[e.id] = need + Rational(uniform_int(rng, 0, 4), 2);
  }
  return li;
}

}  // namespace fixtures
