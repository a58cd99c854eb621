#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"
#include "random.hpp"

namespace sigma {

// ζ*_S = 132 (3 − χ(S)).
inline long default_zeta(int surface_chi) { return 132L * (3 - surface_chi); }

struct Transfer {
  Vertex from;
  Vertex to;
  long amount;
  int rule;  // 1..6
};

struct ChargeLedger {
  std::map<Vertex, long> initial;  // 6 d(v) − 36
  std::map<Vertex, long> final;    // after R1–R6; rule amounts are integral
  std::vector<Transfer> transfers;

  long total_initial() const {
    long s = 0;
    for (const auto& [v, c] : initial) s += c;
    return s;
  }
  long total_final() const {
    long s = 0;
    for (const auto& [v, c] : final) s += c;
    return s;
  }
};

// Amount a big neighbour sends to a small vertex of degree d with b big
// neighbours, or nullopt when no rule applies. R1 is handled separately since
// it is the only rule where every neighbour pays.
inline std::optional<std::pair<int, long>> discharge_rule(std::size_t d, std::size_t b) {
  if (d == 3 && b == 3) return std::pair{1, 6L};
  if (d == 3 && b == 2) return std::pair{2, 9L};
  if (d == 4 && b == 4) return std::pair{3, 3L};
  if (d == 4 && b == 3) return std::pair{4, 4L};
  if (d == 4 && b == 2) return std::pair{5, 6L};
  if (d == 5 && b >= 1) return std::pair{6, 3L};
  return std::nullopt;
}

// All rules fire simultaneously from the initial snapshot; big means
// degree >= ζ + 1.
inline ChargeLedger compute_charges(const SimpleGraph& g, long zeta) {
  ChargeLedger led;
  auto big = [&](Vertex v) { return static_cast<long>(g.degree(v)) >= zeta + 1; };
  for (const auto& [v, nb] : g.adjacency()) led.initial[v] = 6L * static_cast<long>(nb.size()) - 36;
  led.final = led.initial;
  for (const auto& [v, nb] : g.adjacency()) {
    std::size_t b = 0;
    for (Vertex u : nb) b += big(u) ? 1 : 0;
    auto rule = discharge_rule(nb.size(), b);
    if (!rule) continue;
    for (Vertex u : nb) {
      if (rule->first != 1 && !big(u)) continue;
      led.transfers.push_back({u, v, rule->second, rule->first});
      led.final[u] -= rule->second;
      led.final[v] += rule->second;
    }
  }
  return led;
}

inline ChargeLedger compute_charges(const EmbeddedGraph& g, long zeta) { return compute_charges(g.graph(), zeta); }

inline std::string ledger_csv(const ChargeLedger& led) {
  std::map<Vertex, std::vector<std::string>> moves;
  for (const auto& t : led.transfers) {
    moves[t.to].push_back("+" + std::to_string(t.amount) + "R" + std::to_string(t.rule) + "@" + vstr(t.from));
    moves[t.from].push_back("-" + std::to_string(t.amount) + "R" + std::to_string(t.rule) + "@" + vstr(t.to));
  }
  std::ostringstream os;
  os << "vertex,initial,final,transfers\n";
  for (const auto& [v, c] : led.initial) {
    os << v << ',' << c << ',' << led.final.at(v) << ',';
    const auto& m = moves[v];
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? " " : "") << m[i];
    os << '\n';
  }
  return os.str();
}

// Neighbour types of a big vertex, by rotation window.
struct NeighbourClassification {
  Vertex v = -1;
  std::vector<Vertex> m1, m4a, m4b, m5, m6;
  std::vector<Vertex> unclassified;  // small neighbours the proof rules out (degree <= 3 etc.)
};

inline NeighbourClassification classify_neighbours(const EmbeddedGraph& g, Vertex v, long zeta) {
  const auto& G = g.graph();
  auto big = [&](Vertex u) { return static_cast<long>(G.degree(u)) >= zeta + 1; };
  NeighbourClassification nc;
  nc.v = v;
  const auto& r = g.rotation(v);
  const std::size_t k = r.size();
  for (std::size_t i = 0; i < k; ++i) {
    Vertex u = r[i];
    Vertex um = r[(i + k - 1) % k], umm = r[(i + 2 * k - 2) % k];
    Vertex up = r[(i + 1) % k], upp = r[(i + 2) % k];
    if (big(um) || big(umm) || big(up) || big(upp)) {
      nc.m1.push_back(u);
      continue;
    }
    const std::size_t d = G.degree(u);
    if (d == 4 && (G.degree(um) >= 5 || G.degree(up) >= 5))
      nc.m4a.push_back(u);
    else if (d == 4 && G.degree(um) == 4 && G.degree(up) == 4)
      nc.m4b.push_back(u);
    else if (d == 5)
      nc.m5.push_back(u);
    else if (d >= 6)
      nc.m6.push_back(u);
    else
      nc.unclassified.push_back(u);
  }
  return nc;
}

enum class StructureKind { S1, S2, S3, NoneFound };

inline const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::S1: return "S1";
    case StructureKind::S2: return "S2";
    case StructureKind::S3: return "S3";
    case StructureKind::NoneFound: return "none";
  }
  return "?";
}

struct StructureWitness {
  StructureKind kind = StructureKind::NoneFound;
  long zeta = 0;
  // S2
  Vertex s2_vertex = -1;
  std::optional<Vertex> s2_big;  // its unique neighbour of degree > ζ, if any
  // S3
  std::set<Vertex> X, Y;
  std::map<Vertex, std::set<Vertex>> x_of_y;  // X^y
  std::size_t refinement_rounds = 0;
  bool density_heuristic = false;  // (iii) search was heuristic (|X| above the exhaustive limit)
  std::string note;
};

struct DetectOptions {
  std::size_t exhaustive_limit = 20;
  std::uint64_t seed = 0x5157a;
  std::size_t samples = 4096;
};

namespace detail {

// Incremental evaluation of e(W, V∖Y) − e(W, Y∖Y^W) − ζ|W| over subsets W ⊆ X.
class DensityOracle {
 public:
  DensityOracle(const SimpleGraph& g, const std::vector<Vertex>& X, const std::set<Vertex>& Y, long zeta) : X_(X) {
    std::map<Vertex, std::size_t> yidx;
    for (Vertex y : Y) yidx.emplace(y, yidx.size());
    cnt_.assign(Y.size(), 0);
    tot_.assign(Y.size(), 0);
    std::set<Vertex> xs(X.begin(), X.end());
    for (Vertex y : Y)
      for (Vertex u : g.neighbours(y))
        if (xs.count(u)) ++tot_[yidx[y]];
    outside_.resize(X.size());
    ys_.resize(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
      long out = 0;
      for (Vertex u : g.neighbours(X[i])) {
        if (auto it = yidx.find(u); it != yidx.end())
          ys_[i].push_back(it->second);
        else
          ++out;
      }
      outside_[i] = out - zeta;
    }
    in_.assign(X.size(), false);
  }

  void toggle(std::size_t i) {
    const bool adding = !in_[i];
    in_[i] = adding;
    a_ += adding ? outside_[i] : -outside_[i];
    for (auto y : ys_[i]) {
      s_ -= contribution(y);
      cnt_[y] += adding ? 1 : -1;
      s_ += contribution(y);
    }
  }

  long margin() const { return a_ - s_; }  // > 0 means (iii) is violated by W
  std::size_t size() const { return X_.size(); }

 private:
  long contribution(std::size_t y) const { return cnt_[y] < tot_[y] ? cnt_[y] : 0; }

  std::vector<Vertex> X_;
  std::vector<long> outside_;
  std::vector<std::vector<std::size_t>> ys_;
  std::vector<long> cnt_, tot_;
  std::vector<bool> in_;
  long a_ = 0;
  long s_ = 0;
};

// Lexicographic order on sorted index sequences encoded as masks.
inline bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  std::uint64_t diff = a ^ b;
  int d = std::countr_zero(diff);
  std::uint64_t holder = (a >> d) & 1ULL ? a : b;
  std::uint64_t other = holder == a ? b : a;
  bool other_ends = (other >> d) == 0;
  bool a_less = other_ends ? (other == a) : (holder == a);
  return a_less;
}

}  // namespace detail

struct DensitySearch {
  std::optional<std::vector<Vertex>> violating;  // sorted
  bool exhaustive = true;
};

// A non-empty W ⊆ X with e(W, V∖Y) > e(W, Y∖Y^W) + ζ|W|. Exhaustive (returning
// the lexicographically least such W) up to `exhaustive_limit` vertices,
// greedy margin ascent above it.
inline DensitySearch find_density_violation(const SimpleGraph& g, const std::set<Vertex>& Xset,
                                            const std::set<Vertex>& Y, long zeta, std::size_t exhaustive_limit = 20) {
  std::vector<Vertex> X(Xset.begin(), Xset.end());
  detail::DensityOracle oracle(g, X, Y, zeta);
  DensitySearch out;
  const std::size_t n = X.size();
  if (n == 0) return out;
  if (n <= exhaustive_limit && n < 63) {
    std::optional<std::uint64_t> best;
    std::uint64_t gray = 0;
    for (std::uint64_t step = 1; step < (1ULL << n); ++step) {
      std::size_t bit = static_cast<std::size_t>(std::countr_zero(step));
      oracle.toggle(bit);
      gray ^= (1ULL << bit);
      if (oracle.margin() > 0 && (!best || detail::mask_lex_less(gray, *best))) best = gray;
    }
    if (best) {
      std::vector<Vertex> w;
      for (std::size_t i = 0; i < n; ++i)
        if ((*best >> i) & 1ULL) w.push_back(X[i]);
      out.violating = w;
    }
    return out;
  }
  out.exhaustive = false;
  std::vector<bool> chosen(n, false);
  std::vector<Vertex> w;
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<std::size_t> pick;
    long pick_margin = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      oracle.toggle(i);
      long m = oracle.margin();
      oracle.toggle(i);
      if (!pick || m > pick_margin) {
        pick = i;
        pick_margin = m;
      }
    }
    chosen[*pick] = true;
    oracle.toggle(*pick);
    w.push_back(X[*pick]);
    if (oracle.margin() > 0) {
      std::sort(w.begin(), w.end());
      out.violating = w;
      return out;
    }
  }
  return out;
}

struct WitnessReport {
  bool valid = true;
  bool sampled = false;  // (iii) checked on sampled subsets only
  std::vector<std::string> violations;

  void fail(std::string clause) {
    valid = false;
    violations.push_back(std::move(clause));
  }
};

// Re-checks every clause of the claimed structure against g.
inline WitnessReport validate_witness(const SimpleGraph& g, const StructureWitness& w, long zeta,
                                      const DetectOptions& opts = {}) {
  WitnessReport rep;
  auto deg = [&](Vertex v) { return static_cast<long>(g.degree(v)); };
  switch (w.kind) {
    case StructureKind::NoneFound:
      rep.fail("no structure claimed");
      return rep;
    case StructureKind::S1:
      for (Vertex v : g.vertices())
        if (deg(v) > zeta) rep.fail("S1: vertex " + vstr(v) + " has degree " + std::to_string(deg(v)) + " > zeta");
      return rep;
    case StructureKind::S2: {
      if (!g.has_vertex(w.s2_vertex)) {
        rep.fail("S2: unknown vertex");
        return rep;
      }
      if (deg(w.s2_vertex) > 5) rep.fail("S2: vertex " + vstr(w.s2_vertex) + " has degree > 5");
      std::size_t bigs = 0;
      for (Vertex u : g.neighbours(w.s2_vertex)) bigs += deg(u) > zeta ? 1 : 0;
      if (bigs > 1) rep.fail("S2: vertex " + vstr(w.s2_vertex) + " has " + std::to_string(bigs) + " big neighbours");
      return rep;
    }
    case StructureKind::S3:
      break;
  }
  const auto& X = w.X;
  const auto& Y = w.Y;
  if (X.empty() || Y.empty()) rep.fail("S3: X and Y must be non-empty");
  for (Vertex v : X)
    if (Y.count(v)) rep.fail("S3: X and Y intersect at " + vstr(v));
  for (Vertex v : X)
    if (!g.has_vertex(v)) rep.fail("S3: unknown vertex " + vstr(v));
  for (Vertex v : Y)
    if (!g.has_vertex(v)) rep.fail("S3: unknown vertex " + vstr(v));
  if (!rep.valid) return rep;

  auto xof = [&](Vertex y) {
    std::set<Vertex> s;
    for (Vertex u : g.neighbours(y))
      if (X.count(u)) s.insert(u);
    return s;
  };
  for (Vertex x : X)
    if (deg(x) < zeta + 1) rep.fail("S3(i): X-vertex " + vstr(x) + " has degree " + std::to_string(deg(x)) + " <= zeta");
  for (Vertex y : Y) {
    if (deg(y) != 4) rep.fail("S3(i): Y-vertex " + vstr(y) + " has degree " + std::to_string(deg(y)));
    auto xy = xof(y);
    if (xy.size() != 2) rep.fail("S3(i): Y-vertex " + vstr(y) + " has " + std::to_string(xy.size()) + " X-neighbours");
    for (Vertex u : g.neighbours(y))
      if (!X.count(u) && deg(u) != 4)
        rep.fail("S3(i): neighbour " + vstr(u) + " of Y-vertex " + vstr(y) + " has degree " + std::to_string(deg(u)));
    if (auto it = w.x_of_y.find(y); it != w.x_of_y.end() && it->second != xy)
      rep.fail("S3(i): recorded X^" + vstr(y) + " does not match the graph");
  }
  for (auto a = Y.begin(); a != Y.end(); ++a)
    for (auto b = std::next(a); b != Y.end(); ++b) {
      bool related = g.has_edge(*a, *b);
      if (!related)
        for (Vertex u : g.neighbours(*a))
          if (!X.count(u) && g.has_edge(u, *b)) {
            related = true;
            break;
          }
      if (related && xof(*a) != xof(*b))
        rep.fail("S3(ii): " + vstr(*a) + " and " + vstr(*b) + " are related but X^y differ");
    }

  std::vector<Vertex> xs(X.begin(), X.end());
  if (xs.size() <= opts.exhaustive_limit) {
    auto found = find_density_violation(g, X, Y, zeta, opts.exhaustive_limit);
    if (found.violating) {
      std::string s;
      for (Vertex v : *found.violating) s += " " + vstr(v);
      rep.fail("S3(iii): violated for W = {" + s + " }");
    }
    return rep;
  }
  rep.sampled = true;
  detail::DensityOracle oracle(g, xs, Y, zeta);
  auto check = [&](const std::vector<std::size_t>& members) {
    for (auto i : members) oracle.toggle(i);
    bool bad = oracle.margin() > 0;
    for (auto i : members) oracle.toggle(i);
    if (bad) {
      std::string s;
      for (auto i : members) s += " " + vstr(xs[i]);
      rep.fail("S3(iii): violated for W = {" + s + " } (sampled)");
    }
    return bad;
  };
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (check({i})) return rep;
  check([&] {
    std::vector<std::size_t> all(xs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }());
  Rng rng(opts.seed);
  for (std::size_t s = 0; s < opts.samples && rep.valid; ++s) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (rng() & 1ULL) members.push_back(i);
    if (!members.empty()) check(members);
  }
  return rep;
}

inline WitnessReport validate_witness(const EmbeddedGraph& g, const StructureWitness& w, long zeta,
                                      const DetectOptions& opts = {}) {
  return validate_witness(g.graph(), w, zeta, opts);
}

// S1 scan, S2 scan (smallest id first), then the S3 construction from the
// M4b classification with the (X_i, Y_i) refinement.
inline StructureWitness detect_structure(const EmbeddedGraph& g, long zeta, const DetectOptions& opts = {}) {
  const auto& G = g.graph();
  StructureWitness w;
  w.zeta = zeta;
  auto deg = [&](Vertex v) { return static_cast<long>(G.degree(v)); };

  if (static_cast<long>(G.max_degree()) <= zeta) {
    w.kind = StructureKind::S1;
    return w;
  }
  for (Vertex v : G.vertices()) {
    if (deg(v) > 5) continue;
    std::vector<Vertex> bigs;
    for (Vertex u : G.neighbours(v))
      if (deg(u) > zeta) bigs.push_back(u);
    if (bigs.size() <= 1) {
      w.kind = StructureKind::S2;
      w.s2_vertex = v;
      if (!bigs.empty()) w.s2_big = bigs.front();
      return w;
    }
  }

  std::set<Vertex> X, Y;
  for (Vertex v : G.vertices())
    if (deg(v) >= zeta + 1) {
      X.insert(v);
      for (Vertex u : classify_neighbours(g, v, zeta).m4b) Y.insert(u);
    }
  auto x_of = [&](Vertex y, const std::set<Vertex>& xs) {
    std::set<Vertex> s;
    for (Vertex u : G.neighbours(y))
      if (xs.count(u)) s.insert(u);
    return s;
  };
  while (!X.empty() && !Y.empty()) {
    auto found = find_density_violation(G, X, Y, zeta, opts.exhaustive_limit);
    w.density_heuristic = w.density_heuristic || !found.exhaustive;
    if (!found.violating) break;
    std::set<Vertex> prev = X;
    for (Vertex z : *found.violating) X.erase(z);
    std::set<Vertex> keep;
    for (Vertex y : Y) {
      auto xy = x_of(y, prev);
      if (std::includes(X.begin(), X.end(), xy.begin(), xy.end())) keep.insert(y);
    }
    Y = std::move(keep);
    ++w.refinement_rounds;
  }
  if (X.empty() || Y.empty()) {
    w.kind = StructureKind::NoneFound;
    w.note = "refinement exhausted X or Y";
    return w;
  }
  w.kind = StructureKind::S3;
  w.X = X;
  w.Y = Y;
  for (Vertex y : Y) w.x_of_y[y] = x_of(y, X);
  auto rep = validate_witness(G, w, zeta, opts);
  if (!rep.valid) {
    w.kind = StructureKind::NoneFound;
    w.note = rep.violations.front();
  }
  return w;
}

inline std::string witness_text(const StructureWitness& w) {
  std::ostringstream os;
  os << "structure " << to_string(w.kind) << "\nzeta " << w.zeta << '\n';
  if (w.kind == StructureKind::S2) {
    os << "vertex " << w.s2_vertex << '\n';
    if (w.s2_big) os << "big " << *w.s2_big << '\n';
  }
  if (w.kind == StructureKind::S3) {
    os << "X:";
    for (Vertex v : w.X) os << ' ' << v;
    os << "\nY:";
    for (Vertex v : w.Y) os << ' ' << v;
    os << '\n';
    for (const auto& [y, xs] : w.x_of_y) {
      os << "xy " << y << ':';
      for (Vertex x : xs) os << ' ' << x;
      os << '\n';
    }
    os << "rounds " << w.refinement_rounds << '\n';
  }
  if (!w.note.empty()) os << "note " << w.note << '\n';
  return os.str();
}

}  // namespace sigma
