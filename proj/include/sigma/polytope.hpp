#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "lists.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace sigma {

using Matching = std::vector<EdgeId>;  // sorted edge ids

// All matchings of h, the empty one first, in lexicographic order of edge ids.
inline std::vector<Matching> enumerate_matchings(const Multigraph& h, std::size_t edge_budget = 24) {
  if (h.edge_count() > edge_budget)
    throw BudgetExceeded("enumerate_matchings: " + std::to_string(h.edge_count()) + " edges exceed the budget of " +
                         std::to_string(edge_budget));
  const auto edges = h.edges();
  std::vector<Matching> out;
  Matching cur;
  std::set<Vertex> used;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.push_back(cur);
    for (std::size_t i = from; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (used.count(e.u) || used.count(e.v)) continue;
      used.insert(e.u);
      used.insert(e.v);
      cur.push_back(e.id);
      self(self, i + 1);
      cur.pop_back();
      used.erase(e.u);
      used.erase(e.v);
    }
  };
  rec(rec, 0);
  return out;
}

template <class Scalar>
struct ViolatedConstraint {
  bool odd_set = false;
  Vertex vertex = -1;         // vertex constraint
  std::vector<Vertex> W;      // odd-set constraint
  Scalar lhs{}, rhs{}, slack{};  // slack = lhs − rhs > 0
};

template <class Scalar>
struct PolytopeVerdict {
  bool inside = true;
  Scalar scale{1};
  std::optional<ViolatedConstraint<Scalar>> violated;
  bool sampled = false;  // odd sets were sampled rather than enumerated
};

struct MembershipOptions {
  std::size_t exhaustive_vertices = 16;
  std::size_t samples = 20000;
  std::uint64_t seed = 0xed30;
};

namespace detail {

template <class Scalar>
void check_vector(const Multigraph& h, const EdgeVector<Scalar>& x) {
  for (const auto& [e, v] : x) {
    if (!h.has_edge(e)) throw ValidationError("vector entry for unknown edge " + std::to_string(e));
    if (v < Scalar(0)) throw ValidationError("negative entry on edge " + std::to_string(e));
  }
  for (EdgeId e : h.edge_ids())
    if (!x.count(e)) throw ValidationError("vector misses edge " + std::to_string(e));
}

inline std::vector<Vertex> active_vertices(const Multigraph& h) {
  std::set<Vertex> s;
  for (const auto& e : h.edges()) {
    s.insert(e.u);
    s.insert(e.v);
  }
  return {s.begin(), s.end()};
}

// Subset sums over E(W) for W given as a bitmask over `verts`.
template <class Scalar>
struct EdgeMaskTable {
  std::vector<std::pair<std::uint64_t, Scalar>> edges;  // endpoint mask, value

  EdgeMaskTable(const Multigraph& h, const std::vector<Vertex>& verts, const EdgeVector<Scalar>& x) {
    std::map<Vertex, std::size_t> idx;
    for (std::size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = i;
    for (const auto& e : h.edges()) edges.emplace_back((1ULL << idx.at(e.u)) | (1ULL << idx.at(e.v)), x.at(e.id));
  }

  Scalar inside(std::uint64_t mask) const {
    Scalar s(0);
    for (const auto& [m, v] : edges)
      if ((m & mask) == m) s += v;
    return s;
  }
};

}  // namespace detail

// Edmonds: x ∈ λ·MP(H) iff every vertex load is ≤ λ and every odd W with
// |W| ≥ 3 spans at most λ(|W|−1)/2. The first violated constraint is
// reported: vertices ascending, then odd sets by ascending bitmask.
template <class Scalar>
PolytopeVerdict<Scalar> edmonds_membership(const Multigraph& h, const EdgeVector<Scalar>& x, Scalar scale = Scalar(1),
                                           const MembershipOptions& opts = {}) {
  detail::check_vector(h, x);
  if (!(scale > Scalar(0)) || scale > Scalar(1)) throw PreconditionError("scale must lie in (0, 1]");
  PolytopeVerdict<Scalar> out;
  out.scale = scale;
  for (Vertex v : h.vertices()) {
    Scalar load(0);
    for (EdgeId e : h.incident(v)) load += x.at(e);
    if (load > scale) {
      out.inside = false;
      out.violated = ViolatedConstraint<Scalar>{false, v, {}, load, scale, load - scale};
      return out;
    }
  }
  const auto verts = detail::active_vertices(h);
  const std::size_t n = verts.size();
  if (n < 3) return out;
  detail::EdgeMaskTable<Scalar> table(h, verts, x);
  auto check = [&](std::uint64_t mask) {
    const auto k = static_cast<long>(std::popcount(mask));
    Scalar lhs = table.inside(mask);
    Scalar rhs = scale * Scalar(k - 1) / Scalar(2);
    if (!(lhs > rhs)) return false;
    std::vector<Vertex> w;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1ULL) w.push_back(verts[i]);
    out.inside = false;
    out.violated = ViolatedConstraint<Scalar>{true, -1, std::move(w), lhs, rhs, lhs - rhs};
    return true;
  };
  if (n <= opts.exhaustive_vertices) {
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      const int k = std::popcount(mask);
      if (k >= 3 && (k & 1) && check(mask)) return out;
    }
    return out;
  }
  if (n > 64) throw BudgetExceeded("edmonds_membership: more than 64 vertices");
  out.sampled = true;
  Rng rng(opts.seed);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1ULL) mask |= 1ULL << i;
    if (std::popcount(mask) % 2 == 0) mask ^= 1ULL << uniform_below(rng, n);
    if (std::popcount(mask) >= 3 && check(mask)) return out;
  }
  return out;
}

// ---- brute-force convex-hull oracle ---------------------------------------

struct HullVerdict {
  bool inside = false;
  std::vector<std::pair<Matching, Rational>> combination;  // θ_M > 0 when inside
  Rational infeasibility{0};                                // phase-1 optimum when outside
};

namespace detail {

// Phase-1 simplex over exact rationals with Bland's rule:
// find θ ≥ 0 with A θ = b, b ≥ 0. Returns θ or the optimum of Σ artificials.
inline std::pair<std::optional<std::vector<Rational>>, Rational> phase_one(const std::vector<std::vector<Rational>>& A,
                                                                            const std::vector<Rational>& b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  const std::size_t cols = n + m;  // structural then artificial
  std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(cols + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][cols] = b[i];
    basis[i] = n + i;
  }
  // Objective row holds Σ_i row_i over structural columns: the reduced gains.
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) T[m][j] += T[i][j];
  for (std::size_t i = 0; i < m; ++i) T[m][cols] += T[i][cols];

  while (true) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < n; ++j)
      if (T[m][j] > 0) {
        enter = j;
        break;
      }
    if (!enter) break;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(T[i][*enter] > 0)) continue;
      Rational ratio = T[i][cols] / T[i][*enter];
      if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) break;  // unbounded direction cannot occur: the objective is bounded below by 0
    const std::size_t r = *leave;
    const Rational piv = T[r][*enter];
    for (auto& v : T[r]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || T[i][*enter] == 0) continue;
      const Rational f = T[i][*enter];
      for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = *enter;
  }
  Rational residual = T[m][cols];
  if (residual != 0) return {std::nullopt, residual};
  std::vector<Rational> theta(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) theta[basis[i]] = T[i][cols];
  return {theta, Rational(0)};
}

}  // namespace detail

// Decides x ∈ MP(H) directly: x = Σ θ_M 1_M over non-empty matchings with
// Σ θ_M ≤ 1 (the empty matching absorbs the rest).
inline HullVerdict hull_membership_oracle(const Multigraph& h, const EdgeVector<Rational>& x,
                                          std::size_t edge_budget = 24) {
  detail::check_vector(h, x);
  auto all = enumerate_matchings(h, edge_budget);
  std::vector<Matching> ms(all.begin() + 1, all.end());
  const auto ids = h.edge_ids();
  std::map<EdgeId, std::size_t> row;
  for (std::size_t i = 0; i < ids.size(); ++i) row[ids[i]] = i;
  const std::size_t m = ids.size() + 1;
  const std::size_t n = ms.size() + 1;  // matchings plus a slack on Σθ ≤ 1
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> b(m, Rational(0));
  for (std::size_t j = 0; j < ms.size(); ++j) {
    for (EdgeId e : ms[j]) A[row[e]][j] = 1;
    A[m - 1][j] = 1;
  }
  A[m - 1][n - 1] = 1;
  for (std::size_t i = 0; i < ids.size(); ++i) b[i] = x.at(ids[i]);
  b[m - 1] = 1;
  auto [theta, residual] = detail::phase_one(A, b);
  HullVerdict v;
  if (!theta) {
    v.infeasibility = residual;
    return v;
  }
  v.inside = true;
  for (std::size_t j = 0; j < ms.size(); ++j)
    if ((*theta)[j] > 0) v.combination.emplace_back(ms[j], (*theta)[j]);
  return v;
}

// ---- fractional chromatic index ----------------------------------------

// χ′_f = max(Δ, max over odd |W| ≥ 3 of 2|E(W)|/(|W|−1)).
inline Rational fractional_chromatic_index(const Multigraph& h, std::size_t vertex_limit = 20) {
  if (h.edge_count() == 0) return Rational(0);
  Rational best(static_cast<long>(h.max_degree()));
  const auto verts = detail::active_vertices(h);
  if (verts.size() > vertex_limit)
    throw BudgetExceeded("fractional_chromatic_index: " + std::to_string(verts.size()) + " vertices exceed the limit");
  EdgeVector<Rational> ones;
  for (EdgeId e : h.edge_ids()) ones[e] = 1;
  detail::EdgeMaskTable<Rational> table(h, verts, ones);
  for (std::uint64_t mask = 1; mask < (1ULL << verts.size()); ++mask) {
    const long k = std::popcount(mask);
    if (k < 3 || k % 2 == 0) continue;
    best = std::max(best, Rational(2) * table.inside(mask) / Rational(k - 1));
  }
  return best;
}

// Bisection on γ with exact membership of the uniform vector 1/γ.
inline double fractional_chromatic_index_search(const Multigraph& h, double tolerance = 1e-9) {
  if (h.edge_count() == 0) return 0.0;
  double lo = 0.0, hi = 1.5 * static_cast<double>(h.max_degree()) + 1.0;
  auto inside = [&](double gamma) {
    EdgeVector<Rational> x;
    Rational inv = Rational(1) / from_double(gamma);
    for (EdgeId e : h.edge_ids()) x[e] = inv;
    return edmonds_membership<Rational>(h, x).inside;
  };
  while (hi - lo > tolerance / 4) {
    double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---- lemma certificate checker ------------------------------------------

struct LemmaReport {
  bool hypotheses_hold = true;
  std::vector<std::string> failures;  // violated H1′/H2′/H3′ with slack
  bool k_sufficient = false;          // K ≥ max{0, 9ζ/2}
  bool conclusion_checked = false;
  bool falsified = false;
  std::string falsification;
  bool h3_sampled = false;
  Rational min_b{0};
};

inline Rational lemma_k_threshold(const Rational& zeta) { return std::max(Rational(0), Rational(9) * zeta / 2); }

inline LemmaReport lem_mp_certificate(const Multigraph& h, const std::map<Vertex, long>& sigma, long beta,
                                      const Rational& zeta, const Rational& K, const EdgeVector<Rational>& b,
                                      std::size_t exhaustive_vertices = 20) {
  LemmaReport rep;
  auto fail = [&](std::string s) {
    rep.hypotheses_hold = false;
    rep.failures.push_back(std::move(s));
  };
  auto deg = h.degrees();
  auto sig = [&](Vertex v) -> long {
    auto it = sigma.find(v);
    return it == sigma.end() ? 0 : it->second;
  };
  for (Vertex v : h.vertices()) {
    if (!sigma.count(v)) fail("H1': sigma(" + vstr(v) + ") missing");
    long d = static_cast<long>(deg[v]);
    if (d > sig(v)) fail("H1': d(" + vstr(v) + ") = " + std::to_string(d) + " > sigma = " + std::to_string(sig(v)));
    if (sig(v) > beta) fail("H1': sigma(" + vstr(v) + ") = " + std::to_string(sig(v)) + " > beta");
  }
  bool first = true;
  for (const auto& e : h.edges()) {
    auto it = b.find(e.id);
    if (it == b.end() || !(it->second > 0)) {
      fail("b missing or non-positive on edge " + std::to_string(e.id));
      continue;
    }
    if (first || it->second < rep.min_b) rep.min_b = it->second;
    first = false;
    Rational need = Rational(3 * beta, 2) + K - Rational(sig(e.u) - static_cast<long>(deg[e.u])) -
                    Rational(sig(e.v) - static_cast<long>(deg[e.v]));
    if (it->second < need)
      fail("H2': edge " + std::to_string(e.id) + " has b = " + to_string(it->second) + ", slack " +
           to_string(it->second - need));
  }
  // H3′ over subsets of V(H).
  std::vector<Vertex> verts(h.vertices().begin(), h.vertices().end());
  const std::size_t n = verts.size();
  std::map<Vertex, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[verts[i]] = i;
  auto h3 = [&](std::uint64_t mask) {
    Rational lhs(0);
    long cut = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1ULL) lhs += Rational(sig(verts[i]) - static_cast<long>(deg[verts[i]]));
    for (const auto& e : h.edges()) {
      bool a = (mask >> idx[e.u]) & 1ULL, c = (mask >> idx[e.v]) & 1ULL;
      cut += a != c ? 1 : 0;
    }
    Rational rhs = Rational(cut) + zeta * Rational(std::popcount(mask));
    if (lhs > rhs) {
      std::string w;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1ULL) w += " " + vstr(verts[i]);
      fail("H3': W = {" + w + " }, slack " + to_string(lhs - rhs));
      return true;
    }
    return false;
  };
  if (n <= exhaustive_vertices) {
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask)
      if (h3(mask)) break;
  } else if (n <= 64) {
    rep.h3_sampled = true;
    Rng rng(0x4833);
    for (std::size_t i = 0; i < n; ++i)
      if (h3(1ULL << i)) break;
    for (int s = 0; s < 20000 && rep.hypotheses_hold; ++s) {
      std::uint64_t mask = rng() & (n == 64 ? ~0ULL : ((1ULL << n) - 1));
      if (mask) h3(mask);
    }
  } else {
    throw BudgetExceeded("lem_mp_certificate: more than 64 vertices");
  }

  rep.k_sufficient = K >= lemma_k_threshold(zeta);
  if (!rep.hypotheses_hold || !rep.k_sufficient) return rep;
  rep.conclusion_checked = true;
  EdgeVector<Rational> x;
  for (const auto& e : h.edges()) {
    const Rational& be = b.at(e.id);
    if (be * 2 < Rational(beta)) {
      rep.falsified = true;
      rep.falsification = "b on edge " + std::to_string(e.id) + " is below beta/2";
      return rep;
    }
    x[e.id] = Rational(1) / be;
  }
  auto verdict = edmonds_membership<Rational>(h, x);
  if (!verdict.inside) {
    rep.falsified = true;
    rep.falsification = "1/b is outside MP(H)";
  }
  return rep;
}

}  // namespace sigma
