#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffgeo/config.hpp"
#include "diffgeo/funcspace.hpp"
#include "diffgeo/polyengine.hpp"
#include "diffgeo/taylor.hpp"

namespace diffgeo {

// Order-k jet grid of an orientation-preserving C^k diffeomorphism of
// [0,1]: jets[i] = (f(x_i), f'(x_i), ..., f^(k)(x_i)) at x_i = i/n.
// Invariants: f(0) = 0 and f(1) = 1 exactly, f' >= DPOS_MIN at every node,
// values strictly increasing.
struct IntervalDiffeo {
  int order = 1;
  int n = 0;
  std::vector<std::vector<double>> jets;  // (n+1) x (order+1)
  std::string family;                     // provenance tag, may be empty
  std::vector<double> family_params;
};

// Phi_k(f) = (phi_k(f), phi_{k-1}(f)(0), ..., phi_2(f)(0)); for k = 1 the
// head is phi_1(f) itself and there are no initial values.
struct PhiCoords {
  int order = 1;
  GridFunction head;
  std::vector<double> initial_values;  // length max(k-2, 0)
};

inline void validate(const IntervalDiffeo& f) {
  if (f.order < 1 || f.n < 2) throw std::invalid_argument("IntervalDiffeo: bad shape");
  if (static_cast<int>(f.jets.size()) != f.n + 1)
    throw std::invalid_argument("IntervalDiffeo: jet grid size must be n+1");
  for (const auto& jet : f.jets) {
    if (static_cast<int>(jet.size()) != f.order + 1)
      throw std::invalid_argument("IntervalDiffeo: jet length must be order+1");
    for (double v : jet)
      if (!std::isfinite(v)) throw std::invalid_argument("IntervalDiffeo: non-finite jet");
  }
  if (f.jets.front()[0] != 0.0 || f.jets.back()[0] != 1.0)
    throw std::invalid_argument("IntervalDiffeo: endpoints must be fixed exactly");
  for (int i = 0; i <= f.n; ++i) {
    if (f.jets[static_cast<size_t>(i)][1] < DPOS_MIN)
      throw std::invalid_argument("IntervalDiffeo: derivative below DPOS_MIN");
    if (i > 0 && f.jets[static_cast<size_t>(i)][0] <= f.jets[static_cast<size_t>(i) - 1][0])
      throw std::invalid_argument("IntervalDiffeo: values not strictly increasing");
  }
}

// Jet grid as a GridFunction (value row plus derivative rows), the form the
// interpolation and quadrature kernels understand.
inline GridFunction to_grid(const IntervalDiffeo& f) {
  GridFunction g;
  g.n = f.n;
  g.values.resize(static_cast<size_t>(f.n) + 1);
  g.derivs.assign(static_cast<size_t>(f.order),
                  std::vector<double>(static_cast<size_t>(f.n) + 1));
  for (int i = 0; i <= f.n; ++i) {
    g.values[static_cast<size_t>(i)] = f.jets[static_cast<size_t>(i)][0];
    for (int m = 1; m <= f.order; ++m)
      g.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)] =
          f.jets[static_cast<size_t>(i)][static_cast<size_t>(m)];
  }
  return g;
}

// Value and derivatives of the interpolated jet grid at an arbitrary point.
inline std::vector<double> eval_jet(const GridFunction& g, double x, int order) {
  std::vector<double> jet(static_cast<size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) jet[static_cast<size_t>(m)] = detail::eval_row(g, m, x);
  return jet;
}

inline IntervalDiffeo identity_diffeo(int k, int n) {
  IntervalDiffeo f;
  f.order = k;
  f.n = n;
  f.family = "identity";
  f.jets.assign(static_cast<size_t>(n) + 1,
                std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    f.jets[static_cast<size_t>(i)][0] = static_cast<double>(i) / n;
    f.jets[static_cast<size_t>(i)][1] = 1.0;
  }
  f.jets.back()[0] = 1.0;
  return f;
}

namespace families {

// f_a(x) = (e^{ax} - 1)/(e^a - 1); jets a^m e^{ax}/(e^a - 1).
inline std::vector<double> exp_jet(double a, double x, int order) {
  std::vector<double> jet(static_cast<size_t>(order) + 1);
  double c = std::expm1(a);
  jet[0] = std::expm1(a * x) / c;
  double e = std::exp(a * x) / c;
  double am = 1.0;
  for (int m = 1; m <= order; ++m) {
    am *= a;
    jet[static_cast<size_t>(m)] = am * e;
  }
  return jet;
}

// f_t(x) = (1+t)x/(1+tx); jets (1+t) m! (-t)^{m-1} / (1+tx)^{m+1}.
inline std::vector<double> mobius_jet(double t, double x, int order) {
  std::vector<double> jet(static_cast<size_t>(order) + 1);
  double d = 1.0 + t * x;
  jet[0] = (1.0 + t) * x / d;
  double mfact = 1.0;
  double tpow = 1.0;
  double dpow = d * d;
  for (int m = 1; m <= order; ++m) {
    jet[static_cast<size_t>(m)] = (1.0 + t) * mfact * tpow / dpow;
    mfact *= (m + 1);
    tpow *= -t;
    dpow *= d;
  }
  return jet;
}

}  // namespace families

inline IntervalDiffeo from_family(const std::string& name, const std::vector<double>& params,
                                  int k, int n) {
  if (k < 1 || k > K_MAX) throw std::invalid_argument("from_family: order out of range");
  if (name == "identity") return identity_diffeo(k, n);
  if (params.empty()) throw std::invalid_argument("from_family: missing parameter");
  double p = params[0];
  if (name == "exp") {
    if (p == 0.0) {
      IntervalDiffeo f = identity_diffeo(k, n);
      f.family = "exp";
      f.family_params = {0.0};
      return f;
    }
    IntervalDiffeo f;
    f.order = k;
    f.n = n;
    f.family = "exp";
    f.family_params = {p};
    f.jets.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      f.jets[static_cast<size_t>(i)] = families::exp_jet(p, static_cast<double>(i) / n, k);
    f.jets.front()[0] = 0.0;
    f.jets.back()[0] = 1.0;
    validate(f);
    return f;
  }
  if (name == "mobius") {
    if (p <= -1.0) throw std::invalid_argument("from_family: mobius needs t > -1");
    if (p == 0.0) {
      IntervalDiffeo f = identity_diffeo(k, n);
      f.family = "mobius";
      f.family_params = {0.0};
      return f;
    }
    IntervalDiffeo f;
    f.order = k;
    f.n = n;
    f.family = "mobius";
    f.family_params = {p};
    f.jets.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      f.jets[static_cast<size_t>(i)] = families::mobius_jet(p, static_cast<double>(i) / n, k);
    f.jets.front()[0] = 0.0;
    f.jets.back()[0] = 1.0;
    validate(f);
    return f;
  }
  throw std::invalid_argument("from_family: unknown family " + name);
}

namespace detail {

// Taylor coefficients of log f' at node i, to the given order, from the
// stored jet (f', f'', ...).  This one recurrence carries every phi_j.
inline Series log_fprime_series(const std::vector<double>& jet, int order) {
  Series u(order);
  for (int m = 0; m <= order; ++m)
    u[m] = jet[static_cast<size_t>(m) + 1] / factorial(m);
  return series_log(u, order);
}

inline GridFunction phi_from_jets(const std::vector<std::vector<double>>& jets, int order,
                                  int j) {
  if (j < 1 || j > order) throw std::invalid_argument("phi: need 1 <= j <= order");
  int n = static_cast<int>(jets.size()) - 1;
  int rows = order - j;
  GridFunction g;
  g.n = n;
  g.values.resize(static_cast<size_t>(n) + 1);
  g.derivs.assign(static_cast<size_t>(rows), std::vector<double>(static_cast<size_t>(n) + 1));
  double log_fp0 = std::log(jets.front()[1]);
  for (int i = 0; i <= n; ++i) {
    Series w = log_fprime_series(jets[static_cast<size_t>(i)], order - 1);
    if (j == 1) {
      g.values[static_cast<size_t>(i)] = w[0] - log_fp0;
    } else {
      g.values[static_cast<size_t>(i)] = w[j - 1] * factorial(j - 1);
    }
    for (int r = 1; r <= rows; ++r)
      g.derivs[static_cast<size_t>(r) - 1][static_cast<size_t>(i)] =
          w[j - 1 + r] * factorial(j - 1 + r);
  }
  return g;
}

inline PhiCoords Phi_from_jets(const std::vector<std::vector<double>>& jets, int order,
                               int k) {
  if (k < 1 || k > order) throw std::invalid_argument("Phi: need 1 <= k <= order");
  PhiCoords c;
  c.order = k;
  c.head = phi_from_jets(jets, order, k);
  if (k >= 3) {
    Series w0 = log_fprime_series(jets.front(), order - 1);
    c.initial_values.resize(static_cast<size_t>(k) - 2);
    for (int m = k - 1; m >= 2; --m)
      c.initial_values[static_cast<size_t>(k - 1 - m)] = w0[m - 1] * factorial(m - 1);
  }
  return c;
}

}  // namespace detail

// phi_1(f) = log f' - log f'(0); phi_j(f) = (phi_1(f))^(j-1) for j >= 2.
// Computed from stored jets only (log-series recurrence, no numeric
// differentiation).  The result carries derivative samples to order k - j.
inline GridFunction phi(const IntervalDiffeo& f, int j) {
  return detail::phi_from_jets(f.jets, f.order, j);
}

inline PhiCoords Phi(const IntervalDiffeo& f, int k) {
  return detail::Phi_from_jets(f.jets, f.order, k);
}

// The sup norm on C[0,1] x R^{k-2}: max of the head part and the initial
// values, matching the product sup-norm convention.
inline double coord_distance(const PhiCoords& a, const PhiCoords& b) {
  if (a.order != b.order || a.head.n != b.head.n)
    throw std::invalid_argument("coord_distance: mismatched coordinates");
  double m = 0.0;
  for (size_t i = 0; i < a.head.values.size(); ++i)
    m = std::max(m, std::fabs(a.head.values[i] - b.head.values[i]));
  for (size_t i = 0; i < a.initial_values.size(); ++i)
    m = std::max(m, std::fabs(a.initial_values[i] - b.initial_values[i]));
  return m;
}

// Phi_1^{-1}: f(x) = (1/C) int_0^x exp(F), C = int_0^1 exp(F).  Jets of
// u = exp(F) come from the series exponential of F's jet, so the result is
// an order-k grid whenever F carries k-1 derivative rows.
inline IntervalDiffeo from_phi1(const GridFunction& F, int k, int n) {
  if (k < 1) throw std::invalid_argument("from_phi1: order must be >= 1");
  if (F.n != n) throw std::invalid_argument("from_phi1: grid size mismatch");
  if (F.deriv_order() < k - 1)
    throw std::invalid_argument("from_phi1: F needs derivative samples to order k-1");
  if (std::fabs(F.values.front()) > TOL_EXACT)
    throw std::invalid_argument("from_phi1: F(0) must vanish (not in C[0,1]^#)");

  GridFunction u;
  u.n = n;
  u.values.resize(static_cast<size_t>(n) + 1);
  u.derivs.assign(static_cast<size_t>(k) - 1,
                  std::vector<double>(static_cast<size_t>(n) + 1));
  for (int i = 0; i <= n; ++i) {
    Series s(k - 1);
    s[0] = F.values[static_cast<size_t>(i)];
    for (int m = 1; m <= k - 1; ++m)
      s[m] = F.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)] /
             detail::factorial(m);
    Series e = series_exp(s, k - 1);
    u.values[static_cast<size_t>(i)] = e[0];
    for (int m = 1; m <= k - 1; ++m)
      u.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)] =
          e[m] * detail::factorial(m);
  }

  GridFunction cum = antiderivative(u, 0.0);
  double C = cum.values.back();

  IntervalDiffeo f;
  f.order = k;
  f.n = n;
  f.jets.assign(static_cast<size_t>(n) + 1,
                std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    f.jets[static_cast<size_t>(i)][0] = cum.values[static_cast<size_t>(i)] / C;
    f.jets[static_cast<size_t>(i)][1] = u.values[static_cast<size_t>(i)] / C;
    for (int m = 2; m <= k; ++m)
      f.jets[static_cast<size_t>(i)][static_cast<size_t>(m)] =
          u.derivs[static_cast<size_t>(m) - 2][static_cast<size_t>(i)] / C;
  }
  validate(f);
  return f;
}

inline IntervalDiffeo from_phi1(const SmoothFunction& F, int k, int n) {
  return from_phi1(grid_from_smooth(F, n, k - 1), k, n);
}

// Jets of f at g(x_i) composed with jets of g at x_i, via truncated Taylor
// composition.  f's derivative rows are interpolated (Hermite) before the
// composition; the composed values stay exact at the fixed endpoints.
inline IntervalDiffeo compose(const IntervalDiffeo& f, const IntervalDiffeo& g) {
  if (f.order != g.order || f.n != g.n)
    throw std::invalid_argument("compose: orders and grids must match");
  int k = f.order;
  GridFunction gf = to_grid(f);
  IntervalDiffeo r;
  r.order = k;
  r.n = f.n;
  r.jets.assign(static_cast<size_t>(f.n) + 1,
                std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= f.n; ++i) {
    const std::vector<double>& gj = g.jets[static_cast<size_t>(i)];
    std::vector<double> fj = eval_jet(gf, gj[0], k);
    Series A = series_from_jet(fj);
    Series B = series_from_jet(gj);
    B[0] = 0.0;
    Series comp = series_compose(A, B, k);
    r.jets[static_cast<size_t>(i)] = jet_from_series(comp);
  }
  validate(r);
  return r;
}

namespace detail {

// Monotone inversion: bracketed bisection between grid nodes, refined by
// safeguarded Newton to |f(y) - target| <= TOL_ROOT.
inline double invert_value(const GridFunction& g, double target) {
  const std::vector<double>& v = g.values;
  if (target <= v.front()) return 0.0;
  if (target >= v.back()) return 1.0;
  auto it = std::upper_bound(v.begin(), v.end(), target);
  int hi = static_cast<int>(it - v.begin());
  int lo = hi - 1;
  if (v[static_cast<size_t>(lo)] == target) return g.x(lo);
  double a = g.x(lo), b = g.x(hi);
  double y = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    double fy = eval_row(g, 0, y) - target;
    if (std::fabs(fy) <= TOL_ROOT) return y;
    if (fy > 0.0)
      b = y;
    else
      a = y;
    double dy = eval_row(g, 1, y);
    double step = dy > 0.0 ? fy / dy : 0.0;
    double cand = y - step;
    if (step == 0.0 || cand <= a || cand >= b) cand = 0.5 * (a + b);
    y = cand;
  }
  return y;
}

}  // namespace detail

// Values by root finding; jet of order j from the inverse-jet normal form
// R_j(jets of f at f^{-1}(x)) / (f'(f^{-1}(x)))^{2j-1}.
inline IntervalDiffeo invert(const IntervalDiffeo& f) {
  int k = f.order;
  GridFunction gf = to_grid(f);
  std::vector<FormalPoly> R;
  R.reserve(static_cast<size_t>(k));
  for (int j = 1; j <= k; ++j) R.push_back(build_R(j));

  IntervalDiffeo r;
  r.order = k;
  r.n = f.n;
  r.jets.assign(static_cast<size_t>(f.n) + 1,
                std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= f.n; ++i) {
    double y = detail::invert_value(gf, static_cast<double>(i) / f.n);
    std::vector<double> fj = eval_jet(gf, y, k);
    std::map<Var, double> assign;
    for (int m = 1; m <= k; ++m) assign[X(m)] = fj[static_cast<size_t>(m)];
    r.jets[static_cast<size_t>(i)][0] = y;
    double denom = 1.0;
    for (int j = 1; j <= k; ++j) {
      denom *= fj[1] * fj[1];
      r.jets[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          eval_poly(R[static_cast<size_t>(j) - 1], assign) * fj[1] / denom;
    }
  }
  r.jets.front()[0] = 0.0;
  r.jets.back()[0] = 1.0;
  validate(r);
  return r;
}

// rho_k(f,g) = sup |f - g| + sum_{j<=k} ||f^(j) - g^(j)||, node-wise maxima.
inline double rho(const IntervalDiffeo& f, const IntervalDiffeo& g, int k) {
  if (k < 1 || k > f.order || k > g.order || f.n != g.n)
    throw std::invalid_argument("rho: incompatible arguments");
  double total = 0.0;
  for (int m = 0; m <= k; ++m) {
    double sup = 0.0;
    for (int i = 0; i <= f.n; ++i)
      sup = std::max(sup, std::fabs(f.jets[static_cast<size_t>(i)][static_cast<size_t>(m)] -
                                    g.jets[static_cast<size_t>(i)][static_cast<size_t>(m)]));
    total += sup;
  }
  return total;
}

// d_k(f,g) = ||Phi_k(f) - Phi_k(g)||.
inline double dk(const IntervalDiffeo& f, const IntervalDiffeo& g, int k) {
  return coord_distance(Phi(f, k), Phi(g, k));
}

}  // namespace diffgeo
