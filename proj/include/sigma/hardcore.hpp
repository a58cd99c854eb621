#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "lists.hpp"
#include "polytope.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace sigma {

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return to_double(v); }

// Hardcore distribution P_M ∝ Π_{e∈M} λ_e over the matchings of h.
template <class Real>
class HardcoreModel {
 public:
  HardcoreModel(Multigraph h, EdgeVector<Real> lambda, std::size_t edge_budget = 24)
      : h_(std::move(h)), lambda_(std::move(lambda)), ids_(h_.edge_ids()) {
    if (ids_.size() > 63) throw BudgetExceeded("hardcore model limited to 63 edges");
    for (EdgeId e : ids_) {
      auto it = lambda_.find(e);
      if (it == lambda_.end()) throw ValidationError("activity missing for edge " + std::to_string(e));
      if (!(it->second > Real(0))) throw ValidationError("activity on edge " + std::to_string(e) + " is not positive");
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
    for (const auto& m : enumerate_matchings(h_, edge_budget)) {
      std::uint64_t mask = 0;
      Real w(1);
      for (EdgeId e : m) {
        mask |= 1ULL << index_[e];
        w *= lambda_.at(e);
      }
      masks_.push_back(mask);
      weights_.push_back(w);
      z_ += w;
    }
    std::map<Vertex, std::uint64_t> touch;
    for (const auto& e : h_.edges()) {
      touch[e.u] |= 1ULL << index_[e.id];
      touch[e.v] |= 1ULL << index_[e.id];
    }
    touch_ = std::move(touch);
  }

  const Multigraph& graph() const { return h_; }
  const EdgeVector<Real>& activities() const { return lambda_; }
  const Real& partition() const { return z_; }
  std::size_t matching_count() const { return masks_.size(); }

  Matching matching(std::size_t i) const {
    Matching m;
    for (std::size_t k = 0; k < ids_.size(); ++k)
      if ((masks_[i] >> k) & 1ULL) m.push_back(ids_[k]);
    return m;
  }

  Real probability(std::size_t i) const { return weights_[i] / z_; }

  EdgeVector<Real> marginals() const {
    EdgeVector<Real> x;
    for (EdgeId e : ids_) x[e] = Real(0);
    for (std::size_t i = 0; i < masks_.size(); ++i)
      for (std::size_t k = 0; k < ids_.size(); ++k)
        if ((masks_[i] >> k) & 1ULL) x[ids_[k]] += weights_[i];
    for (auto& [e, v] : x) v /= z_;
    return x;
  }

  // Pr(M touches neither u nor v).
  Real avoidance(Vertex u, Vertex v) const {
    if (u == v) throw PreconditionError("avoidance_probability needs distinct vertices");
    const std::uint64_t bad = touching(u) | touching(v);
    Real s(0);
    for (std::size_t i = 0; i < masks_.size(); ++i)
      if (!(masks_[i] & bad)) s += weights_[i];
    return s / z_;
  }

  // Pairwise inclusion probabilities P(e, f ∈ M), indexed like edge_ids().
  std::vector<std::vector<double>> joint() const {
    const std::size_t m = ids_.size();
    std::vector<std::vector<double>> j(m, std::vector<double>(m, 0.0));
    const double z = as_double(z_);
    for (std::size_t i = 0; i < masks_.size(); ++i) {
      const double p = as_double(weights_[i]) / z;
      for (std::size_t a = 0; a < m; ++a) {
        if (!((masks_[i] >> a) & 1ULL)) continue;
        for (std::size_t b = 0; b < m; ++b)
          if ((masks_[i] >> b) & 1ULL) j[a][b] += p;
      }
    }
    return j;
  }

  double entropy() const {
    double h = 0.0;
    for (std::size_t i = 0; i < masks_.size(); ++i) {
      double p = as_double(probability(i));
      if (p > 0) h -= p * std::log(p);
    }
    return h;
  }

  // Exact sampling by cumulative inversion of a 53-bit uniform.
  Matching sample(Rng& rng) const {
    const double u = uniform01(rng) * as_double(z_);
    double acc = 0.0;
    for (std::size_t i = 0; i < masks_.size(); ++i) {
      acc += as_double(weights_[i]);
      if (u < acc) return matching(i);
    }
    return matching(masks_.size() - 1);
  }

  const std::vector<EdgeId>& edge_ids() const { return ids_; }

 private:
  std::uint64_t touching(Vertex v) const {
    auto it = touch_.find(v);
    return it == touch_.end() ? 0 : it->second;
  }

  Multigraph h_;
  EdgeVector<Real> lambda_;
  std::vector<EdgeId> ids_;
  std::map<EdgeId, std::size_t> index_;
  std::map<Vertex, std::uint64_t> touch_;
  std::vector<std::uint64_t> masks_;
  std::vector<Real> weights_;
  Real z_{0};
};

template <class Real>
EdgeVector<Real> marginals_from_activities(const HardcoreModel<Real>& m) {
  return m.marginals();
}

template <class Real>
Real avoidance_probability(const HardcoreModel<Real>& m, Vertex u, Vertex v) {
  return m.avoidance(u, v);
}

template <class Real>
Matching sample_matching(const HardcoreModel<Real>& m, std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  Rng rng(substream(master, tags));
  return m.sample(rng);
}

// Smallest avoidance probability over the endpoint pairs of edges.
template <class Real>
double min_edge_avoidance(const HardcoreModel<Real>& m) {
  double best = 1.0;
  for (const auto& e : m.graph().edges()) best = std::min(best, as_double(m.avoidance(e.u, e.v)));
  return best;
}

struct FitOptions {
  double tolerance = 1e-12;         // target ‖marginals(λ) − x‖∞
  std::size_t max_iterations = 100000;
  double max_activity = 1e12;
  bool check_membership = true;
};

struct FitResult {
  EdgeVector<double> lambda;
  std::size_t iterations = 0;
  std::size_t newton_steps = 0;
  double residual = 0.0;       // ‖marginals(λ) − x‖∞
  double stationarity = 0.0;   // max |x_e − λ_e·avoid(u,v)|
};

namespace detail {

inline double sup_distance(const EdgeVector<double>& a, const EdgeVector<double>& b) {
  double d = 0.0;
  for (const auto& [e, v] : a) d = std::max(d, std::abs(v - b.at(e)));
  return d;
}

// Dense Gaussian elimination with partial pivoting; false if singular.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-300) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return true;
}

}  // namespace detail

// Activities realising the marginals x. Damped fixed point on the
// stationarity identity λ_e = x_e / Pr(M misses both ends of e), then a
// Newton polish in log-activities for the last digits.
inline FitResult activities_from_marginals(const Multigraph& h, const EdgeVector<double>& x, double delta,
                                           const FitOptions& opts = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  for (EdgeId e : h.edge_ids()) {
    auto it = x.find(e);
    if (it == x.end()) throw ValidationError("marginal missing for edge " + std::to_string(e));
    if (!(it->second > 0.0)) throw PreconditionError("marginal on edge " + std::to_string(e) + " must be positive");
  }
  if (opts.check_membership) {
    EdgeVector<Rational> xr;
    for (const auto& [e, v] : x) xr[e] = from_double(v);
    auto verdict = edmonds_membership<Rational>(h, xr, Rational(1) - from_double(delta));
    if (!verdict.inside) throw PreconditionError("marginals are not in (1 - delta) MP(H)");
  }
  FitResult out;
  EdgeVector<double> lam;
  for (EdgeId e : h.edge_ids()) lam[e] = x.at(e);
  if (h.edge_count() == 0) return out;

  double theta = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (; out.iterations < opts.max_iterations; ++out.iterations) {
    HardcoreModel<double> m(h, lam);
    auto cur = m.marginals();
    double res = detail::sup_distance(cur, x);
    if (res <= opts.tolerance) break;
    if (res > prev) theta = std::max(theta * 0.5, 1.0 / 1024);  // oscillation: damp
    prev = res;
    for (const auto& e : h.edges()) {
      double target = x.at(e.id) / m.avoidance(e.u, e.v);
      double next = std::exp((1.0 - theta) * std::log(lam[e.id]) + theta * std::log(target));
      lam[e.id] = std::min(next, opts.max_activity);
    }
    // Linear convergence is slow near the boundary of the polytope; hand
    // over to Newton once the iterate is reasonably close.
    if (res < 1e-6) break;
  }

  const auto ids = h.edge_ids();
  for (int step = 0; step < 100; ++step) {
    HardcoreModel<double> m(h, lam);
    auto cur = m.marginals();
    double res = detail::sup_distance(cur, x);
    out.residual = res;
    if (res <= opts.tolerance) break;
    // F(μ) = log x(μ) − log x*,  ∂ log x_e / ∂ μ_f = (P(e,f) − x_e x_f) / x_e.
    auto j = m.joint();
    std::vector<std::vector<double>> J(ids.size(), std::vector<double>(ids.size()));
    std::vector<double> F(ids.size()), d;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      const double xa = cur.at(ids[a]);
      F[a] = -(std::log(xa) - std::log(x.at(ids[a])));
      for (std::size_t b = 0; b < ids.size(); ++b) J[a][b] = (j[a][b] - xa * cur.at(ids[b])) / xa;
    }
    if (!detail::solve_linear(J, F, d)) break;
    // Backtrack so the residual never grows.
    double t = 1.0;
    EdgeVector<double> trial;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      trial = lam;
      for (std::size_t a = 0; a < ids.size(); ++a) trial[ids[a]] = std::min(lam[ids[a]] * std::exp(t * d[a]), opts.max_activity);
      if (detail::sup_distance(HardcoreModel<double>(h, trial).marginals(), x) < res) break;
    }
    lam = trial;
    ++out.newton_steps;
  }
  HardcoreModel<double> m(h, lam);
  out.residual = detail::sup_distance(m.marginals(), x);
  for (const auto& e : h.edges())
    out.stationarity = std::max(out.stationarity, std::abs(x.at(e.id) - lam[e.id] * m.avoidance(e.u, e.v)));
  if (out.residual > 1e-8)
    throw BudgetExceeded("activity fit did not converge: residual " + std::to_string(out.residual));
  out.lambda = std::move(lam);
  return out;
}

}  // namespace sigma
