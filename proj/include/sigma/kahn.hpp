#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "hardcore.hpp"
#include "lists.hpp"
#include "matching_instance.hpp"
#include "polytope.hpp"
#include "random.hpp"

namespace sigma {

struct ColourState {
  Multigraph h;
  std::map<Colour, std::set<EdgeId>> colour_graph;  // E(H^i_α)
  EdgeLists lists;                                  // L^i(e) for uncoloured e
  EdgeColouring committed;
  std::map<Colour, EdgeVector<double>> activities;  // fitted once on the initial H_α
  std::size_t step = 0;
};

struct TelemetryRow {
  std::size_t step;
  Colour colour;
  std::size_t matched;    // edges committed with this colour in the step
  std::size_t remaining;  // |E(H^{i+1}_α)|
};

// Throws PreconditionError when the uniform vector (1/|L(e)|) is not in
// (1 − δ)·MP(H) or a list is empty.
inline ColourState init_state(const Multigraph& h, const EdgeLists& lists, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  EdgeVector<Rational> x;
  for (EdgeId e : h.edge_ids()) {
    auto it = lists.find(e);
    if (it == lists.end() || it->second.empty()) throw PreconditionError("edge " + std::to_string(e) + " has an empty list");
    x[e] = Rational(1, static_cast<long>(it->second.size()));
  }
  if (!edmonds_membership<Rational>(h, x, Rational(1) - from_double(delta)).inside)
    throw PreconditionError("theorem hypotheses unmet: (1/|L(e)|) is not in (1 - delta) MP(H)");

  ColourState st;
  st.h = h;
  for (EdgeId e : h.edge_ids()) {
    st.lists[e] = lists.at(e);
    for (Colour a : lists.at(e)) st.colour_graph[a].insert(e);
  }
  FitOptions fo;
  fo.check_membership = false;  // restriction of a member of (1−δ)MP(H) to H_α stays inside
  for (const auto& [a, es] : st.colour_graph) {
    Multigraph ha = h.edge_subgraph({es.begin(), es.end()});
    EdgeVector<double> xa;
    for (EdgeId e : es) xa[e] = 1.0 / static_cast<double>(lists.at(e).size());
    st.activities[a] = activities_from_marginals(ha, xa, delta, fo).lambda;
  }
  return st;
}

// Committed colour classes are matchings and α ∈ L(e) ⇔ e ∈ E(H_α).
inline void check_state(const ColourState& st) {
  std::map<std::pair<Vertex, Colour>, EdgeId> at;
  for (const auto& [e, c] : st.committed) {
    const auto& me = st.h.edge(e);
    for (Vertex v : {me.u, me.v})
      if (!at.emplace(std::pair{v, c}, e).second)
        throw InvariantError("colour " + std::to_string(c) + " is not a matching at vertex " + vstr(v));
    if (st.lists.count(e)) throw InvariantError("edge " + std::to_string(e) + " is both coloured and uncoloured");
  }
  for (const auto& [e, l] : st.lists)
    for (Colour a : l) {
      auto it = st.colour_graph.find(a);
      if (it == st.colour_graph.end() || !it->second.count(e))
        throw InvariantError("list/colour-graph mismatch on edge " + std::to_string(e));
    }
  for (const auto& [a, es] : st.colour_graph)
    for (EdgeId e : es) {
      auto it = st.lists.find(e);
      if (it == st.lists.end() || !it->second.count(a))
        throw InvariantError("colour graph " + std::to_string(a) + " holds edge " + std::to_string(e) + " outside its list");
    }
}

inline unsigned colour_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SIGMA_COLOUR_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

// One round of steps (a)–(c). Randomness for colour α in step i comes from
// substream(seed, {i, α}), so the outcome does not depend on thread count.
inline ColourState naive_step(const ColourState& in, std::uint64_t seed, std::vector<TelemetryRow>* telemetry = nullptr,
                              unsigned threads = 1) {
  ColourState st = in;
  const std::size_t step = in.step + 1;
  std::vector<Colour> colours;
  for (const auto& [a, es] : in.colour_graph)
    if (!es.empty()) colours.push_back(a);

  // (a) independent hardcore matchings per colour graph.
  std::vector<Matching> proposal(colours.size());
  auto work = [&](std::size_t i) {
    const Colour a = colours[i];
    const auto& es = in.colour_graph.at(a);
    Multigraph ha = in.h.edge_subgraph({es.begin(), es.end()});
    EdgeVector<double> lam;
    for (EdgeId e : es) lam[e] = in.activities.at(a).at(e);
    HardcoreModel<double> model(std::move(ha), std::move(lam));
    Rng rng(substream(seed, {step, static_cast<std::uint64_t>(a)}));
    proposal[i] = model.sample(rng);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(colours.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < colours.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < colours.size(); i += threads) work(i);
      });
    for (auto& th : pool) th.join();
  }

  // (b) resolve edges proposed by several colours uniformly.
  std::map<EdgeId, std::vector<Colour>> offers;
  for (std::size_t i = 0; i < colours.size(); ++i)
    for (EdgeId e : proposal[i]) offers[e].push_back(colours[i]);
  std::map<Colour, std::vector<EdgeId>> won;
  for (const auto& [e, cs] : offers) {
    Colour c = cs.front();
    if (cs.size() > 1) {
      Rng rng(substream(seed, {step, 0xB0B0ULL, static_cast<std::uint64_t>(e)}));
      c = cs[uniform_below(rng, cs.size())];
    }
    st.committed[e] = c;
    won[c].push_back(e);
  }

  // (c) H_α ← H_α − V(M_α) − (all newly coloured edges).
  for (auto& [a, es] : st.colour_graph) {
    std::set<Vertex> gone;
    if (auto it = won.find(a); it != won.end())
      for (EdgeId e : it->second) {
        gone.insert(in.h.edge(e).u);
        gone.insert(in.h.edge(e).v);
      }
    for (auto it = es.begin(); it != es.end();) {
      const auto& me = in.h.edge(*it);
      if (offers.count(*it) || gone.count(me.u) || gone.count(me.v)) {
        if (auto l = st.lists.find(*it); l != st.lists.end()) l->second.erase(a);
        it = es.erase(it);
      } else {
        ++it;
      }
    }
    if (telemetry) {
      auto w = won.find(a);
      telemetry->push_back({step, a, w == won.end() ? 0 : w->second.size(), es.size()});
    }
  }
  for (const auto& [e, cs] : offers) st.lists.erase(e);
  st.step = step;
  check_state(st);
  return st;
}

// Uncoloured part of the state as a multigraph.
inline Multigraph uncoloured_part(const ColourState& st) {
  std::vector<EdgeId> keep;
  for (const auto& [e, l] : st.lists) keep.push_back(e);
  return st.h.edge_subgraph(keep);
}

inline bool greedy_ready(const Multigraph& h, const EdgeLists& lists, std::size_t T) {
  if (h.max_degree() > T) return false;
  for (EdgeId e : h.edge_ids())
    if (lists.at(e).size() < 2 * T) return false;
  return true;
}

// Ascending edge ids, smallest free colour. With Δ ≤ T every edge meets at
// most 2(T−1) others, so 2T colours always leave one free.
inline EdgeColouring greedy_finish(const Multigraph& h, const EdgeLists& lists, std::size_t T) {
  if (T < 1) throw PreconditionError("greedy_finish: T must be >= 1");
  if (h.max_degree() > T) throw PreconditionError("greedy_finish: max degree exceeds T");
  for (EdgeId e : h.edge_ids())
    if (lists.at(e).size() < 2 * T)
      throw PreconditionError("greedy_finish: edge " + std::to_string(e) + " has fewer than 2T colours");
  EdgeColouring c;
  for (const auto& e : h.edges()) {
    std::set<Colour> used;
    for (Vertex v : {e.u, e.v})
      for (EdgeId f : h.incident(v))
        if (auto it = c.find(f); it != c.end()) used.insert(it->second);
    for (Colour a : lists.at(e.id))
      if (!used.count(a)) {
        c[e.id] = a;
        break;
      }
    if (!c.count(e.id)) throw InvariantError("greedy_finish: no free colour on edge " + std::to_string(e.id));
  }
  return c;
}

struct KahnParams {
  std::optional<double> K;        // default: Δ(H) · max λ
  std::optional<std::size_t> s;   // default: ⌈ln(4K) + 1⌉
  std::optional<std::size_t> T;   // default: ⌈Δ / (2eK)⌉
  std::size_t retries = 8;
  std::uint64_t seed = 1;
  unsigned threads = 0;           // 0: SIGMA_COLOUR_THREADS or hardware
  bool early_finish = true;       // finish greedily as soon as lists ≥ 2Δ(h′)
};

struct KahnResult {
  bool success = false;
  EdgeColouring colouring;
  bool hypotheses_met = true;
  bool greedy_only = false;      // the initial lists already allowed the greedy finish
  std::size_t attempts = 0;
  std::size_t steps = 0;         // naive steps in the successful (or last) attempt
  double K = 0.0;
  std::size_t s = 0;
  std::size_t T = 0;
  std::vector<TelemetryRow> telemetry;
  std::string failure;
  std::size_t final_max_degree = 0;  // uncoloured part after the last attempt
  std::size_t final_min_list = 0;
};

inline std::string telemetry_csv(const std::vector<TelemetryRow>& rows) {
  std::ostringstream os;
  os << "step,colour,matched,remaining\n";
  for (const auto& r : rows) os << r.step << ',' << r.colour << ',' << r.matched << ',' << r.remaining << '\n';
  return os.str();
}

inline KahnResult run(const Multigraph& h, const EdgeLists& lists, const KahnParams& params, double delta) {
  KahnResult out;
  for (EdgeId e : h.edge_ids())
    if (!lists.count(e) || lists.at(e).empty())
      throw PreconditionError("edge " + std::to_string(e) + " has an empty list");
  auto finish_valid = [&](EdgeColouring c) {
    if (auto defect = edge_colouring_defect(h, lists, c)) throw InvariantError("kahn: " + *defect);
    out.colouring = std::move(c);
    out.success = true;
  };
  const std::size_t delta_h = h.max_degree();
  if (params.early_finish && greedy_ready(h, lists, std::max<std::size_t>(1, delta_h))) {
    out.greedy_only = true;
    finish_valid(greedy_finish(h, lists, std::max<std::size_t>(1, delta_h)));
    return out;
  }

  ColourState init;
  try {
    init = init_state(h, lists, delta);
  } catch (const PreconditionError& e) {
    out.hypotheses_met = false;
    out.failure = e.what();
    return out;
  }
  double max_lambda = 0.0;
  for (const auto& [a, lam] : init.activities)
    for (const auto& [e, v] : lam) max_lambda = std::max(max_lambda, v);
  out.K = params.K.value_or(std::max(1e-9, static_cast<double>(delta_h) * max_lambda));
  out.s = params.s.value_or(static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(4.0 * out.K) + 1.0))));
  out.T = params.T.value_or(static_cast<std::size_t>(
      std::max(1.0, std::ceil(static_cast<double>(delta_h) / (2.0 * std::numbers::e * out.K)))));
  if (out.s < 1 || out.T < 1) throw PreconditionError("kahn: s and T must be >= 1");
  const unsigned threads = params.threads ? params.threads : colour_threads();

  for (std::size_t attempt = 0; attempt <= params.retries; ++attempt) {
    ++out.attempts;
    out.telemetry.clear();
    const std::uint64_t seed = substream(params.seed, {0x4B41ULL, attempt});
    ColourState st = init;
    for (std::size_t i = 0; i < out.s; ++i) {
      st = naive_step(st, seed, &out.telemetry, threads);
      if (params.early_finish) {
        auto rest = uncoloured_part(st);
        if (greedy_ready(rest, st.lists, std::max<std::size_t>(1, rest.max_degree()))) break;
      }
    }
    out.steps = st.step;
    auto rest = uncoloured_part(st);
    std::optional<std::size_t> T;
    if (greedy_ready(rest, st.lists, out.T))
      T = out.T;
    else if (params.early_finish && greedy_ready(rest, st.lists, std::max<std::size_t>(1, rest.max_degree())))
      T = std::max<std::size_t>(1, rest.max_degree());
    out.final_max_degree = rest.max_degree();
    out.final_min_list = 0;
    bool first = true;
    for (const auto& [e, l] : st.lists) {
      out.final_min_list = first ? l.size() : std::min(out.final_min_list, l.size());
      first = false;
    }
    if (!T) continue;
    EdgeColouring c = st.committed;
    for (const auto& [e, col] : greedy_finish(rest, st.lists, *T)) c[e] = col;
    finish_valid(std::move(c));
    return out;
  }
  out.failure = "retries exhausted: uncoloured max degree " + std::to_string(out.final_max_degree) +
                ", smallest list " + std::to_string(out.final_min_list);
  return out;
}

}  // namespace sigma
