#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diffgeo/circle_diffeo.hpp"
#include "diffgeo/config.hpp"
#include "diffgeo/interval_diffeo.hpp"
#include "diffgeo/polyengine.hpp"

namespace diffgeo {

inline const std::vector<std::vector<double>>& jet_grid(const IntervalDiffeo& f) {
  return f.jets;
}
inline const std::vector<std::vector<double>>& jet_grid(const CircleDiffeo& f) {
  return f.lift_jets;
}

// Quantitative form of the boundedness criterion: for a finite family the
// criterion always holds, so the report carries the bounds themselves.
struct ObReport {
  int order = 1;
  double sup_log_deriv = 0.0;
  std::vector<double> sup_higher;  // indexed by j = 2..k
  int family_size = 0;
};

template <typename D>
ObReport ob_bounds(const std::vector<D>& family, int k) {
  if (family.empty()) throw std::invalid_argument("ob_bounds: empty family");
  ObReport rep;
  rep.order = k;
  rep.family_size = static_cast<int>(family.size());
  rep.sup_higher.assign(k >= 2 ? static_cast<size_t>(k) - 1 : 0, 0.0);
  for (const D& f : family) {
    if (f.order < k) throw std::invalid_argument("ob_bounds: member order below k");
    for (const auto& jet : jet_grid(f)) {
      rep.sup_log_deriv = std::max(rep.sup_log_deriv, std::fabs(std::log(jet[1])));
      for (int j = 2; j <= k; ++j)
        rep.sup_higher[static_cast<size_t>(j) - 2] =
            std::max(rep.sup_higher[static_cast<size_t>(j) - 2],
                     std::fabs(jet[static_cast<size_t>(j)]));
    }
  }
  return rep;
}

namespace detail {

// sup over nodes of |P^k_j(jets of h^{-1})| for j = 2..k.
inline std::vector<double> translation_poly_sups(const IntervalDiffeo& hinv, int k) {
  std::vector<FormalPoly> P = build_P(k);
  std::vector<double> sups(P.size(), 0.0);
  for (size_t idx = 0; idx < P.size(); ++idx) {
    int arity = static_cast<int>(idx) + 1;  // P^k_{idx+2} has idx+1 variables
    for (const auto& jet : hinv.jets) {
      std::map<Var, double> assign;
      for (int m = 1; m <= arity; ++m) assign[X(m)] = jet[static_cast<size_t>(m)];
      sups[idx] = std::max(sups[idx], std::fabs(eval_poly(P[idx], assign)));
    }
  }
  return sups;
}

}  // namespace detail

// Per-element translation Lipschitz constant,
//   L(h) = sum_{j=2..k} sup_nodes |P^k_j((h^{-1})', ..., (h^{-1})^(j-1))|,
// a computable per-element stand-in for a uniform translation constant: right
// translation by h^{-1} stretches d_k by about this factor.  For k >= 3
// this sum is a heuristic, not a theorem: it treats every ||phi_m(f) -
// phi_m(g)|| as if it were bounded by d_k(f,g), which can undercount by
// the factor k - m + 1.  See lipschitz_bound_weighted for the provable
// variant; the factorization retry loop absorbs the difference.
inline double lipschitz_bound(const IntervalDiffeo& h, int k) {
  if (k < 2)
    throw std::invalid_argument("lipschitz_bound: k must be >= 2 (d_1 is right-invariant)");
  if (h.order < k) throw std::invalid_argument("lipschitz_bound: order below k");
  IntervalDiffeo hinv = invert(h);
  double total = 0.0;
  for (double s : detail::translation_poly_sups(hinv, k)) total += s;
  return total;
}

// Provable per-element Lipschitz constant for right translation by h^{-1}:
// integrating the head down gives ||phi_{k-i+1}(f) - phi_{k-i+1}(g)|| <=
// i * d_k(f,g), so the head terms carry weight i; the initial-value
// components go through the lower-level expansions evaluated at 0 (which
// h^{-1} fixes).  d_k(f h^{-1}, g h^{-1}) <= lipschitz_bound_weighted(h,k)
// * d_k(f,g) holds for all f, g.
inline double lipschitz_bound_weighted(const IntervalDiffeo& h, int k) {
  if (k < 2)
    throw std::invalid_argument("lipschitz_bound_weighted: k must be >= 2");
  if (h.order < k) throw std::invalid_argument("lipschitz_bound_weighted: order below k");
  IntervalDiffeo hinv = invert(h);
  std::vector<double> sups = detail::translation_poly_sups(hinv, k);
  double head = 0.0;
  for (size_t idx = 0; idx < sups.size(); ++idx)
    head += static_cast<double>(idx + 1) * sups[idx];
  double inits = 0.0;
  const std::vector<double>& jet0 = hinv.jets.front();
  for (int m = 2; m <= k - 1; ++m) {
    std::vector<FormalPoly> Pm = build_P(m);
    double sum = 0.0;
    for (size_t idx = 0; idx < Pm.size(); ++idx) {
      std::map<Var, double> assign;
      for (int v = 1; v <= static_cast<int>(idx) + 1; ++v)
        assign[X(v)] = jet0[static_cast<size_t>(v)];
      sum += std::fabs(eval_poly(Pm[idx], assign));
    }
    inits = std::max(inits, sum);
  }
  return std::max(head, inits);
}

template <typename D>
struct FactorizationResult {
  int order = 1;      // the j of the phi_j path
  double epsilon = 0.0;
  std::vector<D> factors;      // product order: f = factors[0] o ... o factors.back()
  std::vector<double> radii;   // d_j(e, factor)
  double recomposition_error = 0.0;
};

namespace detail {

// Phi_j^{-1} on grid data: integrate the head down through the stored
// initial values, then apply the coordinate-inverse formula.
inline IntervalDiffeo phi_path_point(const GridFunction& head,
                                     const std::vector<double>& initial_values, int j,
                                     int order, int n) {
  GridFunction G = head;
  for (int m = j - 1; m >= 2; --m)
    G = antiderivative(G, initial_values[static_cast<size_t>(j - 1 - m)]);
  if (j >= 2) G = antiderivative(G, 0.0);
  return from_phi1(G, order, n);
}

}  // namespace detail

// The epsilon-ball factorization: walk the straight line from 0 to
// Phi_j(f) in coordinate space, pull the waypoints back through
// Phi_j^{-1}, and emit the consecutive quotients g_i = f_i f_{i-1}^{-1}.
// Each quotient lands in the d_j-ball of radius epsilon; if the initial
// step count falls short the count doubles, at most 8 times.
inline FactorizationResult<IntervalDiffeo> factor_into_ball(const IntervalDiffeo& f, int j,
                                                            double eps) {
  if (eps <= 0.0) throw std::domain_error("factor_into_ball: epsilon must be positive");
  if (j < 1 || j > f.order) throw std::invalid_argument("factor_into_ball: bad order");

  FactorizationResult<IntervalDiffeo> res;
  res.order = j;
  res.epsilon = eps;

  IntervalDiffeo e = identity_diffeo(f.order, f.n);
  double dje = dk(f, e, j);
  if (dje <= TOL_EXACT) {
    res.factors.push_back(e);
    res.radii.push_back(0.0);
    res.recomposition_error = rho(e, f, 1);
    return res;
  }

  PhiCoords coords = Phi(f, j);
  double lhat = j == 1 ? 1.0 : std::max(1.0, lipschitz_bound(f, j));
  int r = static_cast<int>(std::floor(lhat * dje / eps)) + 1;

  for (int attempt = 0;; ++attempt) {
    std::vector<IntervalDiffeo> path;
    path.reserve(static_cast<size_t>(r) + 1);
    path.push_back(e);
    for (int i = 1; i <= r; ++i) {
      double s = static_cast<double>(i) / r;
      std::vector<double> inits(coords.initial_values);
      for (double& c : inits) c *= s;
      path.push_back(
          detail::phi_path_point(grid_scale(coords.head, s), inits, j, f.order, f.n));
    }

    std::vector<IntervalDiffeo> factors;
    std::vector<double> radii;
    factors.reserve(static_cast<size_t>(r));
    double worst = 0.0;
    for (int i = 1; i <= r; ++i) {
      IntervalDiffeo gi =
          compose(path[static_cast<size_t>(i)], invert(path[static_cast<size_t>(i) - 1]));
      double rad = dk(gi, e, j);
      worst = std::max(worst, rad);
      factors.push_back(std::move(gi));
      radii.push_back(rad);
    }

    if (worst < eps) {
      IntervalDiffeo acc = factors.front();
      for (int i = 1; i < r; ++i) acc = compose(factors[static_cast<size_t>(i)], acc);
      res.recomposition_error = rho(acc, f, 1);
      res.factors.assign(factors.rbegin(), factors.rend());  // product order g_r ... g_1
      res.radii.assign(radii.rbegin(), radii.rend());
      return res;
    }
    if (attempt >= 8)
      throw std::runtime_error("factor_into_ball: retries exhausted, worst radius " +
                               std::to_string(worst));
    r *= 2;
  }
}

// Circle version: a general element is split as rotation(t) o a* first
// (the rotation is itself a single factor at d_j-distance 0); the
// stabilizer part goes through the interval factorization of its lift.
inline FactorizationResult<CircleDiffeo> factor_into_ball(const CircleDiffeo& f, int j,
                                                          double eps) {
  auto [t, astar] = stabilizer_decompose(f);
  FactorizationResult<IntervalDiffeo> base =
      factor_into_ball(stabilizer_to_interval(astar), j, eps);

  FactorizationResult<CircleDiffeo> res;
  res.order = j;
  res.epsilon = eps;
  if (t != 0.0) {
    res.factors.push_back(rotation(t, f.order, f.n));
    res.radii.push_back(0.0);
  }
  for (const IntervalDiffeo& g : base.factors)
    res.factors.push_back(stabilizer_from_interval(g));
  res.radii.insert(res.radii.end(), base.radii.begin(), base.radii.end());

  CircleDiffeo acc = res.factors.back();
  for (int i = static_cast<int>(res.factors.size()) - 2; i >= 0; --i)
    acc = circle_compose(res.factors[static_cast<size_t>(i)], acc);
  res.recomposition_error = rho(acc, f, 1);
  return res;
}

// Large-scale geodesic chain from the identity to f:
// split f = rotation(t) o h, walk the linear phi_1-path in the stabilizer,
// and twist step i by the rotational n-th-root power rotation(i t / n).
struct ChainResult {
  std::vector<CircleDiffeo> nodes;  // l_0 = e, ..., l_n = f
  std::vector<double> step_costs;   // sigma_1(l_{i-1}, l_i)
  double total_cost = 0.0;
};

inline ChainResult geodesic_chain(const CircleDiffeo& f, int nsteps = 0) {
  if (nsteps < 0) throw std::domain_error("geodesic_chain: step count must be positive");
  CircleDiffeo e = identity_circle(f.order, f.n);
  double s1 = sigma1(f, e);
  ChainResult res;
  if (nsteps == 0 && s1 <= TOL_EXACT) {
    res.nodes.push_back(e);
    return res;
  }
  int n = nsteps > 0 ? nsteps : std::max(1, static_cast<int>(std::ceil(s1)));

  auto [t, h] = stabilizer_decompose(f);
  GridFunction F = circle_phi(h, 1);

  res.nodes.reserve(static_cast<size_t>(n) + 1);
  res.nodes.push_back(e);
  for (int i = 1; i <= n; ++i) {
    double s = static_cast<double>(i) / n;
    res.nodes.push_back(circle_from(grid_scale(F, s), t * s, f.order, f.n));
  }
  res.step_costs.resize(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    res.step_costs[static_cast<size_t>(i) - 1] =
        sigma1(res.nodes[static_cast<size_t>(i) - 1], res.nodes[static_cast<size_t>(i)]);
    res.total_cost += res.step_costs[static_cast<size_t>(i) - 1];
  }
  return res;
}

// d_1 against the norm distance of the Phi_1 images, computed through two
// separate code paths; the difference witnesses the isometry.
struct EmbeddingRow {
  double d1 = 0.0;
  double phi_norm = 0.0;
  double difference = 0.0;
};

inline std::vector<EmbeddingRow> embedding_report(
    const std::vector<std::pair<IntervalDiffeo, IntervalDiffeo>>& pairs) {
  std::vector<EmbeddingRow> rows;
  rows.reserve(pairs.size());
  for (const auto& [f, g] : pairs) {
    EmbeddingRow row;
    row.d1 = dk(f, g, 1);
    row.phi_norm = sup_norm(grid_sub(phi(f, 1), phi(g, 1)));
    row.difference = std::fabs(row.d1 - row.phi_norm);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace diffgeo
