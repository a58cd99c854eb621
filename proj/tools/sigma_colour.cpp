// sigma_colour: generation, validation, colouring, polytope, hardcore and
// discharging workflows over plain-text instance files.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sigma/sigma.hpp"

namespace {

using namespace sigma;

constexpr const char* kVersion = "1.0.0";

// A run that completed but whose answer is negative or whose input breaks an
// invariant; reported with exit status 2.
class Failure : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::uint64_t seed = 1;
  std::optional<long> zeta;
  std::optional<long> beta;
  double delta = 0.1;
  std::string out;
};

// Summary lines always go to stdout; the artifact goes to -o when given and
// to stdout otherwise.
struct Outcome {
  std::string summary;
  std::string artifact;
};

using Handler = std::function<Outcome()>;

void add_common(CLI::App* cmd, Common& c, bool graph_params = true) {
  cmd->add_option("--seed", c.seed, "master seed");
  if (graph_params) {
    cmd->add_option("--zeta", c.zeta, "degree threshold (default 132(3 - chi))");
    cmd->add_option("--beta", c.beta, "bound on |Sigma(v)| (default: max over the input)");
  }
  cmd->add_option("--delta", c.delta, "polytope slack in (0, 1)");
  cmd->add_option("-o,--output", c.out, "artifact path");
}

io::InstanceBundle load_instance(const std::string& path) { return io::read_file(path, io::read_instance); }
// Accepts plain multigraph files and matching instances alike.
Multigraph load_multigraph(const std::string& path) { return io::read_file(path, io::read_matching_instance).h; }

long zeta_for(const Common& c, const EmbeddedGraph& g) { return c.zeta.value_or(default_zeta(g.surface_chi())); }

template <class W>
std::string render(W&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

std::string join(const std::vector<Vertex>& vs) {
  std::string s;
  for (Vertex v : vs) s += (s.empty() ? "" : " ") + vstr(v);
  return s;
}

std::size_t max_sigma_degree(const SimpleGraph& g, const SigmaSystem& s) {
  std::size_t d = 0;
  for (Vertex v : g.vertices()) d = std::max(d, sigma_degree(g, s, v));
  return d;
}

std::size_t distinct_colours(const Colouring& c) {
  std::set<Colour> used;
  for (const auto& [v, a] : c) used.insert(a);
  return used.size();
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string family;
  int k = 4;
  int mu = 2;
  std::size_t n = 20;
  double keep = 1.0;
  std::string sigma = "family";
  std::size_t lists = 0;
};

Outcome gen(const GenArgs& a, const Common& c) {
  Rng rng(substream(c.seed, {0x67656e}));
  if (a.family == "shannon") {
    if (a.mu < 1) throw PreconditionError("--mu must be >= 1");
    Multigraph h;
    EdgeId id = 0;
    for (auto [u, v] : {std::pair<Vertex, Vertex>{0, 1}, {1, 2}, {0, 2}})
      for (int i = 0; i < a.mu; ++i) h.add_edge(u, v, id++);
    return {"", render([&](std::ostream& o) { io::write_multigraph(o, h); })};
  }
  io::InstanceBundle b;
  if (a.family == "random-planar") {
    if (a.n < 3) throw PreconditionError("--n must be >= 3");
    if (!(a.keep > 0.0 && a.keep <= 1.0)) throw PreconditionError("--keep must lie in (0, 1]");
    b.graph = random_maximal_planar(a.n, rng);
    if (a.keep < 1.0) b.graph = thin_planar(b.graph, a.keep, rng);
  } else {
    auto inst = generate_family(a.family, a.k);
    b.graph = inst.graph;
    b.sigma = inst.sigma;
  }
  if (a.sigma == "none") {
    b.sigma = SigmaSystem{};
  } else if (a.sigma == "full") {
    b.sigma = SigmaSystem::neighbourhoods(b.graph.graph());
  } else if (a.sigma == "random") {
    SigmaSystem::Sets sets;
    for (Vertex v : b.graph.graph().vertices())
      for (Vertex u : b.graph.graph().neighbours(v))
        if (uniform01(rng) < 0.5) sets[v].insert(u);
    b.sigma = SigmaSystem(std::move(sets));
  } else if (a.sigma != "family") {
    throw PreconditionError("--sigma must be one of family, none, full, random");
  }
  if (a.lists > 0) b.lists = uniform_lists(b.graph.graph(), a.lists);
  return {"", render([&](std::ostream& o) { io::write_instance(o, b); })};
}

// ---- check -----------------------------------------------------------------

Outcome check(const std::string& path, const std::string& colouring_path) {
  auto b = load_instance(path);
  const auto& G = b.graph.graph();
  std::ostringstream s;
  const long residual = euler_residual(b.graph);
  if (b.graph.cellular() && residual != b.graph.surface_chi())
    throw Failure("embedding declared cellular on chi = " + std::to_string(b.graph.surface_chi()) +
                  " but V - E + F = " + std::to_string(residual));
  s << "vertices " << G.order() << "\nedges " << G.size() << "\neuler_residual " << residual << "\nbeta "
    << b.sigma.beta() << '\n';
  if (!colouring_path.empty()) {
    auto col = io::read_file(colouring_path, io::read_colouring);
    const ListAssignment* lists = b.lists.empty() ? nullptr : &b.lists;
    if (auto d = colouring_defect(G, b.sigma, col, lists)) throw Failure("colouring invalid: " + *d);
    s << "colouring valid\n";
  }
  s << "ok\n";
  return {s.str(), ""};
}

// ---- clique ----------------------------------------------------------------

Outcome clique(const std::string& path, bool square_mode, bool cyclic_mode) {
  if (square_mode && cyclic_mode) throw PreconditionError("--square and --cyclic are exclusive");
  auto b = load_instance(path);
  CliqueResult r;
  if (square_mode) {
    r = max_clique(square(b.graph.graph()));
  } else if (cyclic_mode) {
    auto ci = cyclic_instance(b.graph);
    r = sigma_clique_number(ci.graph, ci.sigma);
  } else {
    r = sigma_clique_number(b.graph.graph(), b.sigma);
  }
  std::ostringstream s;
  s << r.size << "\n# witness: " << join(r.witness) << '\n';
  if (!r.exact) s << "# budget exhausted: the value is a lower bound\n";
  return {s.str(), ""};
}

// ---- colour ----------------------------------------------------------------

Outcome colour(const std::string& path, const std::string& mode, std::size_t list_size, const Common& c) {
  auto b = load_instance(path);
  const auto& G = b.graph.graph();
  ListAssignment lists = b.lists;
  if (list_size > 0) lists = uniform_lists(G, list_size);
  std::ostringstream s;
  Colouring col;
  if (mode == "exact" && lists.empty()) {
    auto r = exact_sigma_chromatic(G, b.sigma);
    if (!r.exact)
      throw Failure("exact search budget exhausted: " + std::to_string(r.lower) + " <= chi <= " +
                    std::to_string(r.upper));
    s << r.upper << '\n';
    col = r.witness;
  } else {
    if (lists.empty()) lists = uniform_lists(G, max_sigma_degree(G, b.sigma) + 1);
    if (mode == "greedy") {
      auto r = greedy_sigma_colouring(G, b.sigma, lists, degeneracy_ordering(conflict_graph(G, b.sigma).base));
      if (!r.success) throw Failure("greedy colouring failed at vertex " + vstr(*r.failed_at));
      col = r.colouring;
    } else if (mode == "exact") {
      auto r = exact_list_colouring(G, b.sigma, lists);
      if (r.status != SearchStatus::Found) throw Failure(std::string("exact list colouring: ") + to_string(r.status));
      col = r.colouring;
    } else if (mode == "pipeline") {
      PipelineParams p;
      p.zeta = c.zeta;
      p.beta = c.beta;
      p.delta = c.delta;
      p.kahn.seed = c.seed;
      auto r = pipeline_sigma_colour(b.graph, b.sigma, lists, p);
      if (!r.success) throw Failure("pipeline: " + r.failure);
      col = r.colouring;
      const auto& st = r.stats;
      s << "# stages s1=" << st.s1 << " s2=" << st.s2 << " s3=" << st.s3 << " none=" << st.none
        << " reductions=" << st.reductions << " kahn=" << st.kahn_successes << '/' << st.kahn_runs
        << " edge_exact=" << st.edge_exact << " fallbacks=" << st.fallbacks << " depth=" << st.depth << '\n';
    } else {
      throw PreconditionError("--mode must be one of greedy, exact, pipeline");
    }
    s << distinct_colours(col) << '\n';
  }
  if (auto d = colouring_defect(G, b.sigma, col, mode == "exact" && b.lists.empty() && list_size == 0 ? nullptr : &lists))
    throw InvariantError("produced colouring is invalid: " + *d);
  return {s.str(), render([&](std::ostream& o) { io::write_colouring(o, col); })};
}

// ---- discharge -------------------------------------------------------------

Outcome discharge_detect(const std::string& path, const Common& c) {
  auto b = load_instance(path);
  auto full = complete_to_edge_maximal(b.graph);
  const long zeta = zeta_for(c, full);
  DetectOptions opts;
  opts.seed = c.seed;
  auto w = detect_structure(full, zeta, opts);
  auto rep = validate_witness(full, w, zeta, opts);
  if (!rep.valid) {
    std::string why;
    for (const auto& v : rep.violations) why += (why.empty() ? "" : "; ") + v;
    throw InvariantError("detected witness fails validation: " + why);
  }
  std::ostringstream s;
  s << to_string(w.kind) << '\n';
  if (full.graph().size() != b.graph.graph().size())
    s << "# completed with " << full.graph().size() - b.graph.graph().size() << " chords\n";
  return {s.str(), witness_text(w) + "valid 1\n"};
}

Outcome discharge_ledger(const std::string& path, const Common& c) {
  auto b = load_instance(path);
  const long zeta = zeta_for(c, b.graph);
  auto led = compute_charges(b.graph, zeta);
  std::ostringstream s;
  s << "# total initial " << led.total_initial() << " final " << led.total_final() << '\n';
  return {s.str(), ledger_csv(led)};
}

// ---- reduce ----------------------------------------------------------------

Outcome reduce(const std::string& path, const Common& c) {
  auto b = load_instance(path);
  auto full = complete_to_edge_maximal(b.graph);
  const long zeta = zeta_for(c, full);
  DetectOptions opts;
  opts.seed = c.seed;
  auto w = detect_structure(full, zeta, opts);
  if (w.kind != StructureKind::S3) throw Failure(std::string("no S3 structure to reduce (found ") + to_string(w.kind) + ")");
  if (auto y = claim_violation(full.graph(), b.sigma, w))
    throw Failure("vertex " + vstr(*y) + " misses a Sigma-set of an X-neighbour; contract it instead");
  auto red = build_reduced_instance(full, b.sigma, w, c.beta.value_or(static_cast<long>(b.sigma.beta())));
  std::ostringstream s;
  s << "reduced " << red.g0.graph().order() << " vertices " << red.g0.graph().size() << " edges\n";
  for (const auto& m : red.trace) {
    s << "# " << to_string(m.kind) << " y=" << m.y;
    if (m.target >= 0) s << " into=" << m.target;
    if (m.other >= 0) s << " other=" << m.other;
    s << " added=" << m.added_edges.size() << '\n';
  }
  io::InstanceBundle out{red.g0, red.sigma0, {}};
  for (const auto& [v, l] : b.lists)
    if (red.g0.graph().has_vertex(v)) out.lists[v] = l;
  return {s.str(), render([&](std::ostream& o) { io::write_instance(o, out); })};
}

// ---- polytope --------------------------------------------------------------

Outcome polytope_member(const std::string& path, const std::string& vector_path, const std::string& scale_text) {
  auto h = load_multigraph(path);
  auto x = io::read_file(vector_path, io::read_marginals);
  auto v = edmonds_membership<Rational>(h, x, parse_rational(scale_text));
  std::ostringstream s;
  s << (v.inside ? "inside" : "outside") << '\n';
  if (v.violated) {
    const auto& vc = *v.violated;
    if (vc.odd_set)
      s << "# odd set {" << join(vc.W) << "}";
    else
      s << "# vertex " << vc.vertex;
    s << " load " << to_string(vc.lhs) << " > " << to_string(vc.rhs) << '\n';
  }
  if (v.sampled) s << "# odd sets sampled\n";
  return {s.str(), ""};
}

Outcome polytope_chi_f(const std::string& path) {
  auto h = load_multigraph(path);
  return {to_string(fractional_chromatic_index(h)) + "\n", ""};
}

// ---- hardcore --------------------------------------------------------------

Outcome hardcore_fit(const std::string& path, const std::string& marginals_path, const Common& c) {
  auto h = load_multigraph(path);
  auto x = io::read_file(marginals_path, [](std::istream& in) { return io::read_reals(in, "x"); });
  auto r = activities_from_marginals(h, x, c.delta);
  std::ostringstream s;
  s << "# residual " << r.residual << " stationarity " << r.stationarity << " iterations " << r.iterations << '\n';
  return {s.str(), render([&](std::ostream& o) { io::write_reals(o, "lam", r.lambda); })};
}

Outcome hardcore_sample(const std::string& path, const std::string& activities_path, std::size_t n,
                        const Common& c) {
  if (n == 0) throw PreconditionError("-n must be positive");
  auto h = load_multigraph(path);
  auto lam = io::read_file(activities_path, [](std::istream& in) { return io::read_reals(in, "lam"); });
  HardcoreModel<double> m(h, lam);
  Rng rng(substream(c.seed, {0x6863}));
  EdgeVector<double> freq;
  for (EdgeId e : h.edge_ids()) freq[e] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (EdgeId e : m.sample(rng)) freq[e] += 1.0;
  for (auto& [e, f] : freq) f /= static_cast<double>(n);
  auto exact = m.marginals();
  std::ostringstream s;
  s << "# samples " << n << " max deviation from exact marginals " << detail::sup_distance(freq, exact) << '\n';
  return {s.str(), render([&](std::ostream& o) { io::write_reals(o, "x", freq); })};
}

// ---- kahn ------------------------------------------------------------------

struct KahnArgs {
  std::string input;
  std::size_t retries = 8;
  std::optional<std::size_t> s, T;
  std::optional<double> K;
  bool no_early_finish = false;
  std::string telemetry;
};

Outcome kahn_run(const KahnArgs& a, const Common& c) {
  auto mi = io::read_file(a.input, io::read_matching_instance);
  KahnParams p;
  p.seed = c.seed;
  p.retries = a.retries;
  p.s = a.s;
  p.T = a.T;
  p.K = a.K;
  p.early_finish = !a.no_early_finish;
  auto r = run(mi.h, mi.lists, p, c.delta);
  std::string telemetry = a.telemetry;
  if (telemetry.empty() && !c.out.empty()) telemetry = c.out + ".telemetry.csv";
  if (!telemetry.empty()) io::write_file(telemetry, [&](std::ostream& o) { o << telemetry_csv(r.telemetry); });
  if (!r.success) throw Failure("kahn: " + r.failure);
  if (auto d = edge_colouring_defect(mi.h, mi.lists, r.colouring)) throw InvariantError("kahn output invalid: " + *d);
  std::ostringstream s;
  s << "# attempts " << r.attempts << " steps " << r.steps << " K " << r.K << " s " << r.s << " T " << r.T
    << (r.greedy_only ? " greedy_only" : "") << '\n';
  return {s.str(), render([&](std::ostream& o) { io::write_colouring(o, r.colouring); })};
}

// ---- report ----------------------------------------------------------------

Outcome report(const std::string& path, const Common& c) {
  auto b = load_instance(path);
  const auto& G = b.graph.graph();
  std::ostringstream s;
  std::size_t dmax = 0;
  for (Vertex v : G.vertices()) dmax = std::max(dmax, G.degree(v));
  const std::size_t dsig = max_sigma_degree(G, b.sigma);
  auto omega = sigma_clique_number(G, b.sigma);
  s << "vertices " << G.order() << "\nedges " << G.size() << "\nmax_degree " << dmax << "\nbeta " << b.sigma.beta()
    << "\nsigma_disjoint " << (b.sigma.pairwise_disjoint() ? 1 : 0) << "\nmax_sigma_degree " << dsig
    << "\ndegeneracy " << degeneracy_ordering(G).q << "\neuler_residual " << euler_residual(b.graph)
    << "\nfaces " << trace_faces(b.graph).size() << "\nclique " << omega.size << (omega.exact ? "" : " (lower bound)")
    << "\nclique_bound_ok " << (2 * omega.size <= 3 * b.sigma.beta() + 152 ? 1 : 0) << '\n';
  if (G.order() > 0 && G.connected()) {
    auto full = complete_to_edge_maximal(b.graph);
    s << "structure " << to_string(detect_structure(full, zeta_for(c, full)).kind) << '\n';
  }
  return {s.str(), ""};
}

std::string header(const Common& c, int argc, char** argv) {
  std::ostringstream h;
  h << "# sigma_colour " << kVersion << " seed=" << c.seed << " zeta=" << (c.zeta ? std::to_string(*c.zeta) : "default")
    << " beta=" << (c.beta ? std::to_string(*c.beta) : "default") << " delta=" << c.delta << " args:";
  for (int i = 1; i < argc; ++i) h << ' ' << argv[i];
  h << '\n';
  return h.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sigma-colouring toolkit for embedded graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  Handler handler;

  GenArgs ga;
  auto* g = app.add_subcommand("gen", "generate an instance");
  g->add_option("family", ga.family, "wegner | borodin | subdivided_complete | random-planar | shannon")->required();
  g->add_option("--k", ga.k, "family parameter");
  g->add_option("--mu", ga.mu, "Shannon multiplicity");
  g->add_option("--n", ga.n, "vertices for random-planar");
  g->add_option("--keep", ga.keep, "edge retention probability for random-planar");
  g->add_option("--sigma", ga.sigma, "family | none | full | random");
  g->add_option("--lists", ga.lists, "attach uniform lists of this size");
  add_common(g, common, false);
  g->callback([&] { handler = [&] { return gen(ga, common); }; });

  std::string input, colouring_path;
  auto* ck = app.add_subcommand("check", "validate an instance and optionally a colouring");
  ck->add_option("instance", input)->required();
  ck->add_option("--colouring", colouring_path, "colouring file to validate");
  add_common(ck, common, false);
  ck->callback([&] { handler = [&] { return check(input, colouring_path); }; });

  bool sq = false, cy = false;
  auto* cl = app.add_subcommand("clique", "maximum clique of the conflict graph");
  cl->add_option("instance", input)->required();
  cl->add_flag("--square", sq, "clique number of the square");
  cl->add_flag("--cyclic", cy, "cyclic clique number via the face-vertex reduction");
  add_common(cl, common, false);
  cl->callback([&] { handler = [&] { return clique(input, sq, cy); }; });

  std::string mode = "pipeline";
  std::size_t list_size = 0;
  auto* co = app.add_subcommand("colour", "list Sigma-colouring");
  co->add_option("instance", input)->required();
  co->add_option("--mode", mode, "greedy | exact | pipeline");
  co->add_option("--lists", list_size, "use uniform lists of this size");
  add_common(co, common);
  co->callback([&] { handler = [&] { return colour(input, mode, list_size, common); }; });

  auto* dc = app.add_subcommand("discharge", "discharging: structure detection and charge ledger");
  dc->require_subcommand(1);
  auto* dd = dc->add_subcommand("detect", "find an S1/S2/S3 structure");
  dd->add_option("instance", input)->required();
  add_common(dd, common);
  dd->callback([&] { handler = [&] { return discharge_detect(input, common); }; });
  auto* dl = dc->add_subcommand("ledger", "charges as CSV");
  dl->add_option("instance", input)->required();
  add_common(dl, common);
  dl->callback([&] { handler = [&] { return discharge_ledger(input, common); }; });

  auto* rd = app.add_subcommand("reduce", "apply the S3 reduction and write the reduced instance");
  rd->add_option("instance", input)->required();
  add_common(rd, common);
  rd->callback([&] { handler = [&] { return reduce(input, common); }; });

  std::string vector_path, scale = "1";
  auto* pc = app.add_subcommand("polytope", "matching polytope queries");
  pc->require_subcommand(1);
  auto* pm = pc->add_subcommand("member", "Edmonds membership of a vector");
  pm->add_option("multigraph", input)->required();
  pm->add_option("--vector", vector_path, "x <edge> <rational> lines")->required();
  pm->add_option("--scale", scale, "test membership in scale * MP(H)");
  add_common(pm, common, false);
  pm->callback([&] { handler = [&] { return polytope_member(input, vector_path, scale); }; });
  auto* pf = pc->add_subcommand("chi-f", "fractional chromatic index");
  pf->add_option("multigraph", input)->required();
  add_common(pf, common, false);
  pf->callback([&] { handler = [&] { return polytope_chi_f(input); }; });

  std::string aux_path;
  std::size_t samples = 100000;
  auto* hc = app.add_subcommand("hardcore", "hardcore model on matchings");
  hc->require_subcommand(1);
  auto* hf = hc->add_subcommand("fit", "activities realising given marginals");
  hf->add_option("multigraph", input)->required();
  hf->add_option("--marginals", aux_path, "x <edge> <real> lines")->required();
  add_common(hf, common, false);
  hf->callback([&] { handler = [&] { return hardcore_fit(input, aux_path, common); }; });
  auto* hs = hc->add_subcommand("sample", "empirical marginals from exact sampling");
  hs->add_option("multigraph", input)->required();
  hs->add_option("--activities", aux_path, "lam <edge> <real> lines")->required();
  hs->add_option("-n", samples, "number of samples");
  add_common(hs, common, false);
  hs->callback([&] { handler = [&] { return hardcore_sample(input, aux_path, samples, common); }; });

  KahnArgs ka;
  auto* kc = app.add_subcommand("kahn", "iterated matching colouring of a matching instance");
  kc->require_subcommand(1);
  auto* kr = kc->add_subcommand("run", "run the colouring procedure");
  kr->add_option("instance", ka.input)->required();
  kr->add_option("--retries", ka.retries, "extra attempts after a failure");
  kr->add_option("--s", ka.s, "number of naive steps");
  kr->add_option("--T", ka.T, "greedy finish threshold");
  kr->add_option("--K", ka.K, "activity scale");
  kr->add_flag("--no-early-finish", ka.no_early_finish, "always run the full schedule");
  kr->add_option("--telemetry", ka.telemetry, "telemetry CSV path (default: <output>.telemetry.csv)");
  add_common(kr, common, false);
  kr->callback([&] { handler = [&] { return kahn_run(ka, common); }; });

  auto* rp = app.add_subcommand("report", "summary statistics of an instance");
  rp->add_option("instance", input)->required();
  add_common(rp, common);
  rp->callback([&] { handler = [&] { return report(input, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    Outcome out = handler();
    const std::string head = header(common, argc, argv);
    std::cout << head << out.summary;
    if (!common.out.empty())
      io::write_file(common.out, [&](std::ostream& o) { o << head << out.artifact; });
    else
      std::cout << out.artifact;
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
