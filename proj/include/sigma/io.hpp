#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "lists.hpp"
#include "matching_instance.hpp"
#include "rational.hpp"
#include "sigma_system.hpp"

namespace sigma::io {

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tok;
};

// Splits into tokens with ':' as its own token; drops comments and blanks.
inline std::vector<Line> lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string spaced;
    for (char ch : raw) spaced += ch == ':' ? std::string(" : ") : std::string(1, ch);
    std::istringstream ss(spaced);
    Line l{n, {}};
    for (std::string t; ss >> t;) l.tok.push_back(t);
    if (!l.tok.empty()) out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] inline void fail(const Line& l, const std::string& what) {
  throw ParseError("line " + std::to_string(l.number) + ": " + what);
}

inline std::int64_t integer(const Line& l, std::size_t i) {
  if (i >= l.tok.size()) fail(l, "missing integer");
  const std::string& t = l.tok[i];
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    fail(l, "expected integer, got '" + t + "'");
  }
  if (used != t.size()) fail(l, "expected integer, got '" + t + "'");
  return v;
}

// "<kw> <v> : <a> <b> ..." -> (v, [a, b, ...])
inline std::pair<std::int64_t, std::vector<std::int64_t>> keyed_list(const Line& l) {
  if (l.tok.size() < 3 || l.tok[2] != ":") fail(l, "expected '" + l.tok[0] + " <id>: ...'");
  std::vector<std::int64_t> items;
  for (std::size_t i = 3; i < l.tok.size(); ++i) items.push_back(integer(l, i));
  return {integer(l, 1), items};
}

inline void expect_arity(const Line& l, std::size_t lo, std::size_t hi) {
  if (l.tok.size() < lo || l.tok.size() > hi) fail(l, "wrong number of fields for '" + l.tok[0] + "'");
}

}  // namespace detail

// ---- embedded graphs ------------------------------------------------------

inline EmbeddedGraph read_embedded(std::istream& in) {
  auto ls = detail::lines(in);
  if (ls.empty()) throw ParseError("empty embedded-graph input");
  const auto& head = ls.front();
  if (head.tok.size() != 4 || head.tok[0] != "surface_chi" || head.tok[2] != "cellular")
    detail::fail(head, "expected 'surface_chi <int> cellular <0|1>'");
  int chi = static_cast<int>(detail::integer(head, 1));
  auto cell = detail::integer(head, 3);
  if (cell != 0 && cell != 1) detail::fail(head, "cellular flag must be 0 or 1");
  EmbeddedGraph::Rotation rot;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].tok[0] != "rot") detail::fail(ls[i], "unknown record '" + ls[i].tok[0] + "'");
    auto [v, nb] = detail::keyed_list(ls[i]);
    if (rot.count(v)) detail::fail(ls[i], "duplicate rotation for " + vstr(v));
    rot[v] = nb;
  }
  return EmbeddedGraph::from_rotation(std::move(rot), chi, cell == 1);
}

inline void write_embedded(std::ostream& out, const EmbeddedGraph& g) {
  out << "surface_chi " << g.surface_chi() << " cellular " << (g.cellular() ? 1 : 0) << '\n';
  for (const auto& [v, r] : g.rotation()) {
    out << "rot " << v << ':';
    for (Vertex u : r) out << ' ' << u;
    out << '\n';
  }
}

// ---- simple graphs and multigraphs ---------------------------------------

inline SimpleGraph read_graph(std::istream& in) {
  SimpleGraph g;
  for (const auto& l : detail::lines(in)) {
    if (l.tok[0] == "vertex") {
      detail::expect_arity(l, 2, 2);
      g.add_vertex(detail::integer(l, 1));
    } else if (l.tok[0] == "edge") {
      detail::expect_arity(l, 3, 4);
      Vertex u = detail::integer(l, 1), v = detail::integer(l, 2);
      if (u == v) detail::fail(l, "loop at " + vstr(u));
      g.add_edge(u, v);
    } else {
      detail::fail(l, "unknown record '" + l.tok[0] + "'");
    }
  }
  return g;
}

inline void write_graph(std::ostream& out, const SimpleGraph& g) {
  for (Vertex v : g.vertices())
    if (g.degree(v) == 0) out << "vertex " << v << '\n';
  for (auto [u, v] : g.edges()) out << "edge " << u << ' ' << v << '\n';
}

namespace detail {

inline bool multigraph_record(Multigraph& h, const Line& l) {
  if (l.tok[0] == "vertex") {
    expect_arity(l, 2, 2);
    h.add_vertex(integer(l, 1));
    return true;
  }
  if (l.tok[0] == "edge") {
    expect_arity(l, 3, 4);
    Vertex u = integer(l, 1), v = integer(l, 2);
    if (u == v) fail(l, "loop at " + vstr(u));
    try {
      if (l.tok.size() == 4)
        h.add_edge(u, v, integer(l, 3));
      else
        h.add_edge(u, v);
    } catch (const Error& e) {
      fail(l, e.what());
    }
    return true;
  }
  return false;
}

}  // namespace detail

inline Multigraph read_multigraph(std::istream& in) {
  Multigraph h;
  for (const auto& l : detail::lines(in))
    if (!detail::multigraph_record(h, l)) detail::fail(l, "unknown record '" + l.tok[0] + "'");
  return h;
}

inline void write_multigraph(std::ostream& out, const Multigraph& h) {
  auto deg = h.degrees();
  for (Vertex v : h.vertices())
    if (deg[v] == 0) out << "vertex " << v << '\n';
  for (const auto& e : h.edges()) out << "edge " << e.u << ' ' << e.v << ' ' << e.id << '\n';
}

// ---- Σ-systems, lists, colourings ----------------------------------------

inline SigmaSystem read_sigma(std::istream& in) {
  SigmaSystem::Sets sets;
  for (const auto& l : detail::lines(in)) {
    if (l.tok[0] != "sigma") detail::fail(l, "unknown record '" + l.tok[0] + "'");
    auto [v, items] = detail::keyed_list(l);
    sets[v].insert(items.begin(), items.end());
  }
  return SigmaSystem(std::move(sets));
}

inline void write_sigma(std::ostream& out, const SigmaSystem& s) {
  for (const auto& [v, set] : s.sets()) {
    out << "sigma " << v << ':';
    for (Vertex u : set) out << ' ' << u;
    out << '\n';
  }
}

inline ListAssignment read_lists(std::istream& in) {
  ListAssignment l;
  for (const auto& line : detail::lines(in)) {
    if (line.tok[0] != "list") detail::fail(line, "unknown record '" + line.tok[0] + "'");
    auto [v, items] = detail::keyed_list(line);
    l[v].insert(items.begin(), items.end());
  }
  return l;
}

inline void write_lists(std::ostream& out, const std::map<std::int64_t, std::set<Colour>>& lists) {
  for (const auto& [v, cs] : lists) {
    out << "list " << v << ':';
    for (Colour c : cs) out << ' ' << c;
    out << '\n';
  }
}

// `col <id> <colour>`; used for vertex and edge colourings alike.
inline std::map<std::int64_t, Colour> read_colouring(std::istream& in) {
  std::map<std::int64_t, Colour> c;
  for (const auto& l : detail::lines(in)) {
    if (l.tok[0] != "col") detail::fail(l, "unknown record '" + l.tok[0] + "'");
    detail::expect_arity(l, 3, 3);
    if (!c.emplace(detail::integer(l, 1), detail::integer(l, 2)).second) detail::fail(l, "duplicate colour entry");
  }
  return c;
}

inline void write_colouring(std::ostream& out, const std::map<std::int64_t, Colour>& c) {
  for (const auto& [v, col] : c) out << "col " << v << ' ' << col << '\n';
}

// ---- matching instances --------------------------------------------------

inline MatchingInstance read_matching_instance(std::istream& in) {
  MatchingInstance mi;
  for (const auto& l : detail::lines(in)) {
    if (detail::multigraph_record(mi.h, l)) continue;
    if (l.tok[0] == "list") {
      auto [e, items] = detail::keyed_list(l);
      mi.lists[e].insert(items.begin(), items.end());
    } else if (l.tok[0] == "sigma") {
      if (l.tok.size() != 4 || l.tok[2] != ":") detail::fail(l, "expected 'sigma <x>: <int>'");
      mi.sigma[detail::integer(l, 1)] = detail::integer(l, 3);
    } else if (l.tok[0] == "origin") {
      detail::expect_arity(l, 3, 3);
      mi.origin[detail::integer(l, 1)] = detail::integer(l, 2);
    } else {
      detail::fail(l, "unknown record '" + l.tok[0] + "'");
    }
  }
  for (const auto& [e, cs] : mi.lists)
    if (!mi.h.has_edge(e)) throw ParseError("list given for unknown edge " + std::to_string(e));
  return mi;
}

inline void write_matching_instance(std::ostream& out, const MatchingInstance& mi) {
  write_multigraph(out, mi.h);
  write_lists(out, mi.lists);
  for (const auto& [x, s] : mi.sigma) out << "sigma " << x << ": " << s << '\n';
  for (const auto& [e, y] : mi.origin) out << "origin " << e << ' ' << y << '\n';
}

// ---- per-edge vectors ----------------------------------------------------

// `x <edge-id> <rational>` lines.
inline EdgeVector<Rational> read_marginals(std::istream& in) {
  EdgeVector<Rational> x;
  for (const auto& l : detail::lines(in)) {
    if (l.tok[0] != "x") detail::fail(l, "unknown record '" + l.tok[0] + "'");
    detail::expect_arity(l, 3, 3);
    try {
      x[detail::integer(l, 1)] = parse_rational(l.tok[2]);
    } catch (const Error& e) {
      detail::fail(l, e.what());
    }
  }
  return x;
}

inline void write_marginals(std::ostream& out, const EdgeVector<Rational>& x) {
  for (const auto& [e, v] : x) out << "x " << e << ' ' << to_string(v) << '\n';
}

// `lam <edge-id> <real>` (or `x` with reals) lines.
inline EdgeVector<double> read_reals(std::istream& in, const std::string& keyword) {
  EdgeVector<double> x;
  for (const auto& l : detail::lines(in)) {
    if (l.tok[0] != keyword) detail::fail(l, "unknown record '" + l.tok[0] + "'");
    detail::expect_arity(l, 3, 3);
    try {
      x[detail::integer(l, 1)] = std::stod(l.tok[2]);
    } catch (const std::exception&) {
      detail::fail(l, "expected a real, got '" + l.tok[2] + "'");
    }
  }
  return x;
}

inline void write_reals(std::ostream& out, const std::string& keyword, const EdgeVector<double>& x) {
  auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& [e, v] : x) out << keyword << ' ' << e << ' ' << v << '\n';
  out.precision(old);
}

// ---- instance bundles ----------------------------------------------------

// An embedded graph with its Σ-system and optional lists in one file:
// `surface_chi`/`rot` records, then `sigma` and `list` records.
struct InstanceBundle {
  EmbeddedGraph graph;
  SigmaSystem sigma;
  ListAssignment lists;
};

inline InstanceBundle read_instance(std::istream& in) {
  // Each record kind goes to its own reader; other lines become blanks so
  // error messages keep the original line numbers.
  std::ostringstream emb, sig, lst;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    std::string body = raw.substr(0, raw.find('#'));
    std::istringstream ss(body);
    std::string kw;
    ss >> kw;
    if (auto c = kw.find(':'); c != std::string::npos) kw.erase(c);
    auto& target = kw == "sigma" ? sig : kw == "list" ? lst : emb;
    for (auto* o : {&emb, &sig, &lst}) *o << (o == &target ? body : std::string()) << '\n';
  }
  std::istringstream e(emb.str()), s(sig.str()), l(lst.str());
  InstanceBundle b{read_embedded(e), read_sigma(s), read_lists(l)};
  b.sigma.validate(b.graph.graph());
  for (const auto& [v, cs] : b.lists)
    if (!b.graph.graph().has_vertex(v)) throw ParseError("list given for unknown vertex " + vstr(v));
  return b;
}

inline void write_instance(std::ostream& out, const InstanceBundle& b) {
  write_embedded(out, b.graph);
  write_sigma(out, b.sigma);
  write_lists(out, b.lists);
}

// ---- file helpers --------------------------------------------------------

template <class Reader>
auto read_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  return reader(in);
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  writer(out);
}

}  // namespace sigma::io
