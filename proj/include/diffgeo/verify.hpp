#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "diffgeo/config.hpp"
#include "diffgeo/geometry.hpp"
#include "diffgeo/sampling.hpp"

namespace diffgeo {

struct CheckRow {
  std::string kind;
  int k = 0;
  double residual = 0.0;
  double tolerance = TOL_NUM;
};

inline bool all_pass(const std::vector<CheckRow>& rows) {
  for (const CheckRow& r : rows)
    if (!(r.residual <= r.tolerance)) return false;
  return true;
}

namespace verify_detail {

// Closed-form inverse jets for the two interval families; the independent
// oracle for the R_k identity.  exp_a^{-1}(y) = log1p((e^a - 1) y)/a with
// (f^{-1})^(m) = (-1)^{m-1} (m-1)! c^m / (a (1+cy)^m); the inverse of a
// Moebius map is the Moebius map with parameter -t/(1+t).
inline std::vector<double> exp_inverse_jet(double a, double y, int order) {
  std::vector<double> jet(static_cast<size_t>(order) + 1);
  double c = std::expm1(a);
  jet[0] = std::log1p(c * y) / a;
  double num = c;
  double den = 1.0 + c * y;
  double sign = 1.0;
  double mfact = 1.0;
  double denpow = den;
  for (int m = 1; m <= order; ++m) {
    jet[static_cast<size_t>(m)] = sign * mfact * num / (a * denpow);
    num *= c;
    denpow *= den;
    sign = -sign;
    mfact *= m;
  }
  return jet;
}

inline std::vector<IntervalDiffeo> q_suite_members(int k, int n) {
  return {from_family("exp", {-2.0}, k, n),    from_family("exp", {1.0}, k, n),
          from_family("exp", {3.0}, k, n),     from_family("mobius", {-0.4}, k, n),
          from_family("mobius", {0.5}, k, n),  from_family("mobius", {1.5}, k, n)};
}

inline std::vector<IntervalDiffeo> r_suite_members(int k, int n) {
  return {from_family("exp", {-1.0}, k, n),    from_family("exp", {0.7}, k, n),
          from_family("exp", {1.0}, k, n),     from_family("mobius", {-0.4}, k, n),
          from_family("mobius", {0.3}, k, n),  from_family("mobius", {0.5}, k, n)};
}

}  // namespace verify_detail

// The jet identity: f^(k) = Q_k(f', ..., f^(k-1), phi_2, ..., phi_k),
// relative residual on exact-jet family members.
inline CheckRow check_Q(int k, int n) {
  FormalPoly Qk = build_Q(k);
  double worst = 0.0;
  for (const IntervalDiffeo& f : verify_detail::q_suite_members(k, n)) {
    for (const auto& jet : f.jets) {
      Series w = detail::log_fprime_series(jet, k - 1);
      std::map<Var, double> assign;
      for (int m = 1; m <= k - 1; ++m) assign[X(m)] = jet[static_cast<size_t>(m)];
      for (int j = 2; j <= k; ++j) assign[Y(j)] = w[j - 1] * detail::factorial(j - 1);
      double lhs = jet[static_cast<size_t>(k)];
      double res = std::fabs(lhs - eval_poly(Qk, assign)) / (1.0 + std::fabs(lhs));
      worst = std::max(worst, res);
    }
  }
  return {"Q", k, worst, TOL_EXACT};
}

// The inverse-jet identity, checked through the production inverse (root finding
// plus the R_k normal form) against the closed-form inverse jets.
inline CheckRow check_R(int k, int n) {
  double worst = 0.0;
  for (const IntervalDiffeo& f : verify_detail::r_suite_members(k, n)) {
    IntervalDiffeo fi = invert(f);
    for (int i = 0; i <= n; ++i) {
      double y = static_cast<double>(i) / n;
      std::vector<double> oracle;
      if (f.family == "exp") {
        oracle = verify_detail::exp_inverse_jet(f.family_params[0], y, k);
      } else {
        double t = f.family_params[0];
        oracle = families::mobius_jet(-t / (1.0 + t), y, k);
      }
      worst = std::max(worst, std::fabs(fi.jets[static_cast<size_t>(i)][static_cast<size_t>(k)] -
                                        oracle[static_cast<size_t>(k)]));
    }
  }
  return {"R", k, worst, TOL_NUM};
}

// The expansion of phi_k(f h^{-1}) against the direct
// computation on the composed jet grid.
inline CheckRow check_P(int k, int n) {
  std::vector<std::pair<IntervalDiffeo, IntervalDiffeo>> pairs = {
      {from_family("exp", {0.8}, k, n), from_family("mobius", {0.5}, k, n)},
      {from_family("mobius", {-0.3}, k, n), from_family("exp", {-0.9}, k, n)},
      {from_family("mobius", {0.7}, k, n), from_family("mobius", {0.4}, k, n)}};
  std::vector<FormalPoly> P = build_P(k);
  double worst = 0.0;
  for (const auto& [f, h] : pairs) {
    IntervalDiffeo hinv = invert(h);
    IntervalDiffeo comp = compose(f, hinv);
    GridFunction direct = phi(comp, k);
    std::vector<GridFunction> phis_f, phis_h;
    for (int m = 2; m <= k; ++m) {
      phis_f.push_back(phi(f, m));
      phis_h.push_back(phi(h, m));
    }
    for (int i = 0; i <= n; ++i) {
      double ystar = hinv.jets[static_cast<size_t>(i)][0];
      double acc = 0.0;
      for (int j = 2; j <= k; ++j) {
        int m = k + 2 - j;  // the phi_m difference paired with P^k_j
        std::map<Var, double> assign;
        for (int v = 1; v <= j - 1; ++v)
          assign[X(v)] = hinv.jets[static_cast<size_t>(i)][static_cast<size_t>(v)];
        double diff = eval(phis_f[static_cast<size_t>(m) - 2], ystar) -
                      eval(phis_h[static_cast<size_t>(m) - 2], ystar);
        acc += diff * eval_poly(P[static_cast<size_t>(j) - 2], assign);
      }
      worst = std::max(worst, std::fabs(direct.values[static_cast<size_t>(i)] - acc));
    }
  }
  return {"P", k, worst, TOL_NUM};
}

inline std::vector<CheckRow> verify_identities(int maxK, int n) {
  std::vector<CheckRow> rows;
  for (int k = 2; k <= maxK; ++k) rows.push_back(check_Q(k, n));
  for (int k = 1; k <= maxK; ++k) rows.push_back(check_R(k, n));
  for (int k = 2; k <= maxK; ++k) rows.push_back(check_P(k, n));
  return rows;
}

// Structural invariants exercised on seeded random family members.
inline std::vector<CheckRow> verify_invariants(int maxK, int n, uint64_t seed) {
  std::vector<CheckRow> rows;
  Sampler rng(seed);

  {  // round trip through Phi_1^{-1}
    double worst = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      IntervalDiffeo f = rng.interval_member(1, n);
      IntervalDiffeo back = from_phi1(phi(f, 1), 1, n);
      for (int i = 0; i <= n; ++i)
        worst = std::max(worst, std::fabs(back.jets[static_cast<size_t>(i)][0] -
                                          f.jets[static_cast<size_t>(i)][0]));
    }
    rows.push_back({"phi1_roundtrip", 1, worst, TOL_NUM});
  }

  {  // cocycle: phi_1(f h^{-1}) = [phi_1(f) - phi_1(h)] o h^{-1}
    double worst = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      IntervalDiffeo f = rng.interval_member(1, n);
      IntervalDiffeo h = rng.interval_member(1, n);
      IntervalDiffeo hinv = invert(h);
      GridFunction lhs = phi(compose(f, hinv), 1);
      GridFunction pf = phi(f, 1), ph = phi(h, 1);
      for (int i = 0; i <= n; ++i) {
        double y = hinv.jets[static_cast<size_t>(i)][0];
        double rhs = eval(pf, y) - eval(ph, y);
        worst = std::max(worst, std::fabs(lhs.values[static_cast<size_t>(i)] - rhs));
      }
    }
    rows.push_back({"cocycle", 1, worst, TOL_NUM});
  }

  {  // d_1 is right-invariant on the interval
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      IntervalDiffeo f = rng.interval_member(1, n);
      IntervalDiffeo g = rng.interval_member(1, n);
      IntervalDiffeo h = rng.interval_member(1, n);
      worst = std::max(worst, std::fabs(dk(compose(f, h), compose(g, h), 1) - dk(f, g, 1)));
    }
    rows.push_back({"d1_right_invariance", 1, worst, TOL_NUM});
  }

  // Lipschitz chain at the identity
  for (int k = 2; k <= maxK; ++k) {
    double worst = 0.0;
    IntervalDiffeo e = identity_diffeo(k, n);
    for (int rep = 0; rep < 4; ++rep) {
      IntervalDiffeo f = rng.interval_member_moderate(k, n);
      worst = std::max(worst, dk(f, e, k - 1) - 2.0 * dk(f, e, k));
    }
    rows.push_back({"lipschitz_chain", k, std::max(worst, 0.0), TOL_EXACT});
  }

  {  // derivative bounds through Phi_1^{-1}
    double worst = 0.0;
    for (double delta : {0.25, 0.5, 1.0, 2.0}) {
      IntervalDiffeo f = from_family("exp", {0.95 * delta}, 1, n);
      IntervalDiffeo fi = invert(f);
      double lo = std::exp(-2.0 * delta), hi = std::exp(2.0 * delta);
      for (int i = 0; i <= n; ++i) {
        for (const IntervalDiffeo* d : {&f, &fi}) {
          double fp = d->jets[static_cast<size_t>(i)][1];
          worst = std::max(worst, std::max(lo - fp, fp - hi));
        }
      }
    }
    rows.push_back({"deriv_bounds", 1, std::max(worst, 0.0), 1e-8});
  }

  {  // Phi_1(S h) = Phi_1(h) for rotations S
    double worst = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
      CircleDiffeo h = rng.circle_member(1, n);
      CircleDiffeo S = rotation(rng.uniform(), 1, n);
      GridFunction a = circle_phi(circle_compose(S, h), 1);
      GridFunction b = circle_phi(h, 1);
      for (size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::fabs(a.values[i] - b.values[i]));
    }
    rows.push_back({"phi1_rotation_invariance", 1, worst, TOL_EXACT});
  }

  {  // sigma_1 is exactly right-invariant under stabilizer translations.
     // The two sides sample their suprema on grids offset by h, so the
     // computed deviation carries the O(h^2) node-sampling gap; the
     // tolerance allows for it explicitly.
    double worst = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      CircleDiffeo f = rng.circle_member(1, n);
      CircleDiffeo g = rng.circle_member(1, n);
      CircleDiffeo h = cosine_circle(rng.uniform(-0.85, 0.85), 0.0, 1, n);
      worst = std::max(worst,
                       std::fabs(sigma1(circle_compose(f, h), circle_compose(g, h)) -
                                 sigma1(f, g)));
    }
    rows.push_back({"sigma1_stabilizer_invariance", 1, worst, 1e-5});
  }

  {  // sigma_1 - 2 <= d_1 <= sigma_1 on the stabilizer
    double worst = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
      CircleDiffeo f = cosine_circle(rng.uniform(-0.85, 0.85), 0.0, 1, n);
      CircleDiffeo g = cosine_circle(rng.uniform(-0.85, 0.85), 0.0, 1, n);
      double s = sigma1(f, g), d = circle_dk(f, g, 1);
      worst = std::max(worst, std::max(d - s, s - 2.0 - d));
    }
    rows.push_back({"sigma1_vs_d1_stabilizer", 1, std::max(worst, 0.0), TOL_NUM});
  }

  {  // Phi_1 is an isometry for d_1
    double worst = 0.0;
    std::vector<std::pair<IntervalDiffeo, IntervalDiffeo>> pairs;
    for (int rep = 0; rep < 6; ++rep)
      pairs.emplace_back(rng.interval_member(1, n), rng.interval_member(1, n));
    for (const EmbeddingRow& row : embedding_report(pairs))
      worst = std::max(worst, row.difference);
    rows.push_back({"embedding_isometry", 1, worst, TOL_EXACT});
  }

  return rows;
}

}  // namespace diffgeo
