#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffgeo/config.hpp"
#include "diffgeo/funcspace.hpp"
#include "diffgeo/interval_diffeo.hpp"
#include "diffgeo/taylor.hpp"

namespace diffgeo {

// Circle diffeomorphism stored through its normalized lift on [0,1]:
// lift_jets[i] = (ftilde(x_i), ftilde'(x_i), ..., ftilde^(k)(x_i)).
// Invariants: ftilde(0) in [0,1); ftilde(1) = ftilde(0) + 1 exactly;
// derivative rows agree at the endpoints; ftilde' >= DPOS_MIN everywhere.
struct CircleDiffeo {
  int order = 1;
  int n = 0;
  std::vector<std::vector<double>> lift_jets;  // (n+1) x (order+1)
  std::string family;
  std::vector<double> family_params;
};

// Canonical representative in [0,1).  Every mod-1 reduction routes through
// here; the half-open convention is the single source of truth.
inline double canon_mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  if (r < 0.0) r = 0.0;
  return r;
}

// Chordal distance |e^{2 pi i x} - e^{2 pi i y}| = 2 |sin(pi (x - y))|.
inline double circle_distance(double x, double y) {
  return 2.0 * std::fabs(std::sin(std::numbers::pi * (x - y)));
}

// Validates the lift invariants (closure drift must stay below TOL_EXACT)
// and then enforces them bit-exactly: node n is rewritten from node 0.
inline void normalize_circle(CircleDiffeo& f) {
  if (f.order < 1 || f.n < 2) throw std::invalid_argument("CircleDiffeo: bad shape");
  if (static_cast<int>(f.lift_jets.size()) != f.n + 1)
    throw std::invalid_argument("CircleDiffeo: lift grid size must be n+1");
  for (const auto& jet : f.lift_jets) {
    if (static_cast<int>(jet.size()) != f.order + 1)
      throw std::invalid_argument("CircleDiffeo: jet length must be order+1");
    for (double v : jet)
      if (!std::isfinite(v)) throw std::invalid_argument("CircleDiffeo: non-finite jet");
  }
  double base = f.lift_jets.front()[0];
  if (base < 0.0 || base >= 1.0)
    throw std::invalid_argument("CircleDiffeo: lift not normalized, ftilde(0) outside [0,1)");
  if (std::fabs(f.lift_jets.back()[0] - base - 1.0) > TOL_EXACT)
    throw std::invalid_argument("CircleDiffeo: lift does not close up, ftilde(1) != ftilde(0)+1");
  for (int m = 1; m <= f.order; ++m) {
    if (std::fabs(f.lift_jets.back()[static_cast<size_t>(m)] -
                  f.lift_jets.front()[static_cast<size_t>(m)]) > TOL_EXACT)
      throw std::invalid_argument("CircleDiffeo: derivative rows not periodic");
  }
  f.lift_jets.back() = f.lift_jets.front();
  f.lift_jets.back()[0] = base + 1.0;
  for (int i = 0; i <= f.n; ++i) {
    if (f.lift_jets[static_cast<size_t>(i)][1] < DPOS_MIN)
      throw std::invalid_argument("CircleDiffeo: lift derivative below DPOS_MIN");
    if (i > 0 &&
        f.lift_jets[static_cast<size_t>(i)][0] <= f.lift_jets[static_cast<size_t>(i) - 1][0])
      throw std::invalid_argument("CircleDiffeo: lift values not strictly increasing");
  }
}

inline GridFunction to_lift_grid(const CircleDiffeo& f) {
  GridFunction g;
  g.n = f.n;
  g.values.resize(static_cast<size_t>(f.n) + 1);
  g.derivs.assign(static_cast<size_t>(f.order),
                  std::vector<double>(static_cast<size_t>(f.n) + 1));
  for (int i = 0; i <= f.n; ++i) {
    g.values[static_cast<size_t>(i)] = f.lift_jets[static_cast<size_t>(i)][0];
    for (int m = 1; m <= f.order; ++m)
      g.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)] =
          f.lift_jets[static_cast<size_t>(i)][static_cast<size_t>(m)];
  }
  return g;
}

// Lift evaluated at any real argument through the periodic extension
// ftilde(y + m) = ftilde(y) + m; derivative rows are 1-periodic.
inline std::vector<double> lift_eval_jet(const GridFunction& lift, double y, int order) {
  double m = std::floor(y);
  double u = y - m;
  if (u >= 1.0) {  // guard against floor rounding at the seam
    u -= 1.0;
    m += 1.0;
  }
  std::vector<double> jet = eval_jet(lift, u, order);
  jet[0] += m;
  return jet;
}

// The rotation [x] -> [(x + t) mod 1]; lift x + t, higher jets (1, 0, ...).
inline CircleDiffeo rotation(double t, int k, int n) {
  CircleDiffeo f;
  f.order = k;
  f.n = n;
  f.family = "rotation";
  f.family_params = {canon_mod1(t)};
  double tc = f.family_params[0];
  f.lift_jets.assign(static_cast<size_t>(n) + 1,
                     std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    f.lift_jets[static_cast<size_t>(i)][0] = static_cast<double>(i) / n + tc;
    f.lift_jets[static_cast<size_t>(i)][1] = 1.0;
  }
  normalize_circle(f);
  return f;
}

inline CircleDiffeo identity_circle(int k, int n) { return rotation(0.0, k, n); }

// rotation(t) o h where h is the stabilizer element with phi_1(h) = F
// (the coordinate-inverse formula applied to the lift).  F must vanish at both endpoints and
// carry periodically compatible derivative samples.
inline CircleDiffeo circle_from(const GridFunction& F, double t, int k, int n) {
  if (std::fabs(F.values.back()) > TOL_EXACT)
    throw std::invalid_argument("circle_from: F(1) must vanish (lift would not close up)");
  for (int m = 1; m <= k - 1; ++m) {
    if (std::fabs(F.derivs[static_cast<size_t>(m) - 1].back() -
                  F.derivs[static_cast<size_t>(m) - 1].front()) > TOL_EXACT)
      throw std::invalid_argument("circle_from: F derivative samples not periodic");
  }
  IntervalDiffeo h = from_phi1(F, k, n);
  CircleDiffeo c;
  c.order = k;
  c.n = n;
  c.lift_jets = std::move(h.jets);
  double tc = canon_mod1(t);
  for (auto& jet : c.lift_jets) jet[0] += tc;
  normalize_circle(c);
  return c;
}

inline CircleDiffeo circle_from(const SmoothFunction& F, double t, int k, int n) {
  return circle_from(grid_from_smooth(F, n, k - 1), t, k, n);
}

// Cosine stabilizer family: lift x + (a/2pi) sin(2 pi x), so that
// ftilde' = 1 + a cos(2 pi x); requires |a| < 1.
inline CircleDiffeo cosine_circle(double a, double t, int k, int n) {
  if (std::fabs(a) >= 1.0)
    throw std::invalid_argument("cosine_circle: need |a| < 1 for a positive derivative");
  CircleDiffeo f;
  f.order = k;
  f.n = n;
  f.family = "cosine";
  f.family_params = {a, canon_mod1(t)};
  double tc = f.family_params[1];
  const double twopi = 2.0 * std::numbers::pi;
  f.lift_jets.assign(static_cast<size_t>(n) + 1,
                     std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    double x = static_cast<double>(i) / n;
    auto& jet = f.lift_jets[static_cast<size_t>(i)];
    jet[0] = x + a / twopi * std::sin(twopi * x) + tc;
    double scale = a;
    for (int m = 1; m <= k; ++m) {
      jet[static_cast<size_t>(m)] =
          scale * std::cos(twopi * x + (m - 1) * std::numbers::pi / 2.0);
      scale *= twopi;
    }
    jet[1] += 1.0;
  }
  normalize_circle(f);
  return f;
}

// Lift composition with wrap-around bookkeeping; the result is
// re-normalized so that its lift satisfies the two lift invariants.
inline CircleDiffeo circle_compose(const CircleDiffeo& f, const CircleDiffeo& g) {
  if (f.order != g.order || f.n != g.n)
    throw std::invalid_argument("circle_compose: orders and grids must match");
  int k = f.order;
  GridFunction lf = to_lift_grid(f);
  CircleDiffeo r;
  r.order = k;
  r.n = f.n;
  r.lift_jets.assign(static_cast<size_t>(f.n) + 1,
                     std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= f.n; ++i) {
    const std::vector<double>& gj = g.lift_jets[static_cast<size_t>(i)];
    std::vector<double> fj = lift_eval_jet(lf, gj[0], k);
    Series A = series_from_jet(fj);
    Series B = series_from_jet(gj);
    B[0] = 0.0;
    Series comp = series_compose(A, B, k);
    r.lift_jets[static_cast<size_t>(i)] = jet_from_series(comp);
  }
  double shift = std::floor(r.lift_jets.front()[0]);
  if (shift != 0.0)
    for (auto& jet : r.lift_jets) jet[0] -= shift;
  normalize_circle(r);
  return r;
}

// Monotone root finding on the periodically extended lift; inversion jets
// from the inverse-jet normal form, as in the interval case.
inline CircleDiffeo circle_invert(const CircleDiffeo& f) {
  int k = f.order;
  GridFunction lf = to_lift_grid(f);
  std::vector<FormalPoly> R;
  R.reserve(static_cast<size_t>(k));
  for (int j = 1; j <= k; ++j) R.push_back(build_R(j));

  CircleDiffeo r;
  r.order = k;
  r.n = f.n;
  r.lift_jets.assign(static_cast<size_t>(f.n) + 1,
                     std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
  for (int i = 0; i <= f.n; ++i) {
    double target = static_cast<double>(i) / f.n;
    double y;
    if (target >= lf.values.front()) {
      y = detail::invert_value(lf, target);
    } else {
      y = detail::invert_value(lf, target + 1.0) - 1.0;
    }
    std::vector<double> fj = lift_eval_jet(lf, y, k);
    std::map<Var, double> assign;
    for (int m = 1; m <= k; ++m) assign[X(m)] = fj[static_cast<size_t>(m)];
    r.lift_jets[static_cast<size_t>(i)][0] = y;
    double denom = 1.0;
    for (int j = 1; j <= k; ++j) {
      denom *= fj[1] * fj[1];
      r.lift_jets[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          eval_poly(R[static_cast<size_t>(j) - 1], assign) * fj[1] / denom;
    }
  }
  double shift = std::floor(r.lift_jets.front()[0]);
  if (shift != 0.0)
    for (auto& jet : r.lift_jets) jet[0] -= shift;
  normalize_circle(r);
  return r;
}

// phi/Phi/d_k with the identical formulas applied to lift jets.  On the
// circle d_k is only a pseudometric: every rotation sits at distance 0
// from the identity.
inline GridFunction circle_phi(const CircleDiffeo& f, int j) {
  return detail::phi_from_jets(f.lift_jets, f.order, j);
}

inline PhiCoords circle_Phi(const CircleDiffeo& f, int k) {
  return detail::Phi_from_jets(f.lift_jets, f.order, k);
}

inline double circle_dk(const CircleDiffeo& f, const CircleDiffeo& g, int k) {
  return coord_distance(circle_Phi(f, k), circle_Phi(g, k));
}

// sigma_1(f,g) = sup_x d_{S^1}(f(x), g(x)) + ||Phi_1(f) - Phi_1(g)||.
inline double sigma1(const CircleDiffeo& f, const CircleDiffeo& g) {
  if (f.n != g.n) throw std::invalid_argument("sigma1: mismatched grids");
  double chordal = 0.0;
  for (int i = 0; i <= f.n; ++i)
    chordal = std::max(chordal, circle_distance(f.lift_jets[static_cast<size_t>(i)][0],
                                                g.lift_jets[static_cast<size_t>(i)][0]));
  GridFunction pf = circle_phi(f, 1);
  GridFunction pg = circle_phi(g, 1);
  double head = 0.0;
  for (size_t i = 0; i < pf.values.size(); ++i)
    head = std::max(head, std::fabs(pf.values[i] - pg.values[i]));
  return chordal + head;
}

// rho_k on the circle: chordal sup plus derivative-row sups.
inline double rho(const CircleDiffeo& f, const CircleDiffeo& g, int k) {
  if (k < 1 || k > f.order || k > g.order || f.n != g.n)
    throw std::invalid_argument("rho: incompatible arguments");
  double total = 0.0;
  for (int i = 0; i <= f.n; ++i)
    total = std::max(total, circle_distance(f.lift_jets[static_cast<size_t>(i)][0],
                                            g.lift_jets[static_cast<size_t>(i)][0]));
  for (int m = 1; m <= k; ++m) {
    double sup = 0.0;
    for (int i = 0; i <= f.n; ++i)
      sup = std::max(sup,
                     std::fabs(f.lift_jets[static_cast<size_t>(i)][static_cast<size_t>(m)] -
                               g.lift_jets[static_cast<size_t>(i)][static_cast<size_t>(m)]));
    total += sup;
  }
  return total;
}

// Writes a = rotation(t) o a*, with a* in the stabilizer of 0.  The shift
// is applied directly on the lift so a* fixes 0 bit-exactly.
inline std::pair<double, CircleDiffeo> stabilizer_decompose(const CircleDiffeo& a) {
  double t = canon_mod1(a.lift_jets.front()[0]);
  CircleDiffeo s = a;
  s.family.clear();
  s.family_params.clear();
  for (auto& jet : s.lift_jets) jet[0] -= t;
  normalize_circle(s);
  return {t, s};
}

// Stabilizer elements are interval diffeomorphisms of the lift; this view
// feeds them to the interval machinery (factorization, phi-paths).
inline IntervalDiffeo stabilizer_to_interval(const CircleDiffeo& f) {
  if (f.lift_jets.front()[0] != 0.0)
    throw std::invalid_argument("stabilizer_to_interval: diffeomorphism does not fix 0");
  IntervalDiffeo g;
  g.order = f.order;
  g.n = f.n;
  g.jets = f.lift_jets;
  validate(g);
  return g;
}

inline CircleDiffeo stabilizer_from_interval(const IntervalDiffeo& f) {
  CircleDiffeo c;
  c.order = f.order;
  c.n = f.n;
  c.lift_jets = f.jets;
  normalize_circle(c);
  return c;
}

}  // namespace diffgeo
