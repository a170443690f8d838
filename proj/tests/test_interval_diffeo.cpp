#include "doctest.h"

#include <cmath>

#include "diffgeo/interval_diffeo.hpp"
#include "diffgeo/sampling.hpp"

using namespace diffgeo;

namespace {

// Independent phi oracles for the analytic families.
double phi_exp_oracle(double a, double x, int j) {
  if (j == 1) return a * x;
  if (j == 2) return a;
  return 0.0;
}

double phi_mobius_oracle(double t, double x, int j) {
  if (j == 1) return -2.0 * std::log1p(t * x);
  double sign = (j % 2 == 0) ? -1.0 : 1.0;
  double fact = 1.0;
  for (int i = 2; i <= j - 2; ++i) fact *= i;
  return sign * 2.0 * fact * std::pow(t, j - 1) / std::pow(1.0 + t * x, j - 1);
}

double mobius_value(double t, double x) { return (1.0 + t) * x / (1.0 + t * x); }

}  // namespace

TEST_CASE("from_family: identity jets") {
  IntervalDiffeo f = from_family("identity", {}, 3, 64);
  for (int i = 0; i <= 64; ++i) {
    CHECK(f.jets[static_cast<size_t>(i)][0] == doctest::Approx(i / 64.0));
    CHECK(f.jets[static_cast<size_t>(i)][1] == 1.0);
    CHECK(f.jets[static_cast<size_t>(i)][2] == 0.0);
    CHECK(f.jets[static_cast<size_t>(i)][3] == 0.0);
  }
}

TEST_CASE("from_family: exp family values and degenerate parameter") {
  IntervalDiffeo f = from_family("exp", {1.0}, 2, 64);
  CHECK(f.jets[0][0] == 0.0);
  CHECK(f.jets[0][1] == doctest::Approx(1.0 / std::expm1(1.0)).epsilon(1e-15));
  IntervalDiffeo e = from_family("exp", {0.0}, 2, 64);
  for (int i = 0; i <= 64; ++i) CHECK(e.jets[static_cast<size_t>(i)][1] == 1.0);
}

TEST_CASE("from_family: invalid mobius parameter") {
  CHECK_THROWS_AS(from_family("mobius", {-1.5}, 2, 64), std::invalid_argument);
}

TEST_CASE("phi: identity and exp family against symbolic oracles") {
  int n = 256;
  IntervalDiffeo e = identity_diffeo(3, n);
  GridFunction p1 = phi(e, 1);
  for (double v : p1.values) CHECK(v == 0.0);

  double a = 1.7;
  IntervalDiffeo f = from_family("exp", {a}, 4, n);
  for (int j = 1; j <= 4; ++j) {
    GridFunction pj = phi(f, j);
    for (int i = 0; i <= n; ++i)
      CHECK(std::fabs(pj.values[static_cast<size_t>(i)] -
                      phi_exp_oracle(a, pj.x(i), j)) <= 1e-12);
  }
}

TEST_CASE("phi: mobius family against symbolic oracles, all orders") {
  int n = 256;
  double t = 0.8;
  IntervalDiffeo f = from_family("mobius", {t}, 5, n);
  for (int j = 1; j <= 5; ++j) {
    GridFunction pj = phi(f, j);
    for (int i = 0; i <= n; ++i)
      CHECK(std::fabs(pj.values[static_cast<size_t>(i)] -
                      phi_mobius_oracle(t, pj.x(i), j)) <= 1e-10);
  }
}

TEST_CASE("phi: derivative rows are the next log-derivatives") {
  int n = 128;
  IntervalDiffeo f = from_family("mobius", {0.6}, 4, n);
  GridFunction p2 = phi(f, 2);
  GridFunction p3 = phi(f, 3);
  REQUIRE(p2.deriv_order() == 2);
  for (int i = 0; i <= n; ++i)
    CHECK(p2.derivs[0][static_cast<size_t>(i)] ==
          doctest::Approx(p3.values[static_cast<size_t>(i)]).epsilon(1e-13));
}

TEST_CASE("phi: order guard") {
  IntervalDiffeo f = from_family("exp", {1.0}, 2, 64);
  CHECK_THROWS_AS(phi(f, 3), std::invalid_argument);
}

TEST_CASE("Phi: assembly and the identity goes to zero") {
  int n = 128;
  double a = 1.1;
  IntervalDiffeo f = from_family("exp", {a}, 3, n);
  PhiCoords c3 = Phi(f, 3);
  REQUIRE(c3.initial_values.size() == 1);
  CHECK(c3.initial_values[0] == doctest::Approx(a).epsilon(1e-13));
  CHECK(sup_norm(c3.head) <= 1e-12);

  PhiCoords e1 = Phi(identity_diffeo(1, n), 1);
  CHECK(sup_norm(e1.head) == 0.0);
  CHECK(e1.head.values[0] == 0.0);

  PhiCoords c2 = Phi(f, 2);
  for (double v : c2.head.values) CHECK(v == doctest::Approx(a).epsilon(1e-13));
}

TEST_CASE("from_phi1: zero gives the identity, linear gives the exp family") {
  int n = 512;
  IntervalDiffeo e = from_phi1(SmoothFunction::zero(), 2, n);
  for (int i = 0; i <= n; ++i)
    CHECK(e.jets[static_cast<size_t>(i)][0] == doctest::Approx(i / 512.0).epsilon(1e-13));

  double a = 1.9;
  IntervalDiffeo f = from_phi1(SmoothFunction::linear(a), 3, n);
  IntervalDiffeo g = from_family("exp", {a}, 3, n);
  for (int i = 0; i <= n; ++i) {
    CHECK(std::fabs(f.jets[static_cast<size_t>(i)][0] - g.jets[static_cast<size_t>(i)][0]) <=
          TOL_NUM);
    CHECK(std::fabs(f.jets[static_cast<size_t>(i)][1] - g.jets[static_cast<size_t>(i)][1]) <=
          TOL_NUM);
  }
}

TEST_CASE("from_phi1: rejects F with F(0) != 0") {
  SmoothFunction bad([](double, int m) {
    std::vector<double> j(static_cast<size_t>(m) + 1, 0.0);
    j[0] = 0.5;
    return j;
  }, K_MAX);
  CHECK_THROWS_AS(from_phi1(bad, 1, 64), std::invalid_argument);
}

TEST_CASE("from_phi1 round trip on both families") {
  int n = 1024;
  for (auto& [name, p] : std::vector<std::pair<std::string, double>>{
           {"exp", -2.0}, {"exp", 3.0}, {"mobius", 0.9}, {"mobius", -0.5}}) {
    IntervalDiffeo f = from_family(name, {p}, 2, n);
    IntervalDiffeo back = from_phi1(phi(f, 1), 2, n);
    for (int i = 0; i <= n; ++i)
      CHECK(std::fabs(back.jets[static_cast<size_t>(i)][0] -
                      f.jets[static_cast<size_t>(i)][0]) <= TOL_NUM);
  }
}

TEST_CASE("compose: identity laws hold exactly at nodes") {
  int n = 256;
  IntervalDiffeo f = from_family("mobius", {0.7}, 3, n);
  IntervalDiffeo e = identity_diffeo(3, n);
  IntervalDiffeo fe = compose(f, e);
  for (int i = 0; i <= n; ++i)
    CHECK(fe.jets[static_cast<size_t>(i)][0] == f.jets[static_cast<size_t>(i)][0]);
  IntervalDiffeo ef = compose(e, f);
  for (int i = 0; i <= n; ++i)
    CHECK(ef.jets[static_cast<size_t>(i)][0] ==
          doctest::Approx(f.jets[static_cast<size_t>(i)][0]).epsilon(1e-14));
}

TEST_CASE("compose: mobius parameters compose, node-wise closed form") {
  int n = 512;
  double t1 = 0.5, t2 = 0.25;
  IntervalDiffeo f = from_family("mobius", {t1}, 3, n);
  IntervalDiffeo g = from_family("mobius", {t2}, 3, n);
  IntervalDiffeo fg = compose(f, g);
  for (int i = 0; i <= n; ++i) {
    double x = static_cast<double>(i) / n;
    CHECK(std::fabs(fg.jets[static_cast<size_t>(i)][0] -
                    mobius_value(t1, mobius_value(t2, x))) <= 1e-10);
  }
}

TEST_CASE("compose/invert: group axioms") {
  int n = 512;
  IntervalDiffeo f = from_family("exp", {1.4}, 3, n);
  IntervalDiffeo fi = invert(f);
  IntervalDiffeo e = identity_diffeo(3, n);
  CHECK(rho(compose(f, fi), e, 1) <= TOL_NUM);
  CHECK(rho(compose(fi, f), e, 1) <= TOL_NUM);
  CHECK(rho(invert(fi), f, 1) <= TOL_NUM);

  IntervalDiffeo g = from_family("mobius", {0.4}, 3, n);
  IntervalDiffeo h = from_family("exp", {-0.8}, 3, n);
  CHECK(rho(compose(compose(f, g), h), compose(f, compose(g, h)), 1) <= TOL_NUM);
}

TEST_CASE("invert: identity and closed-form exp inverse") {
  int n = 512;
  IntervalDiffeo e = identity_diffeo(2, n);
  IntervalDiffeo ei = invert(e);
  for (int i = 0; i <= n; ++i)
    CHECK(ei.jets[static_cast<size_t>(i)][0] == doctest::Approx(i / 512.0).epsilon(1e-13));

  double a = 2.0;
  double c = std::expm1(a);
  IntervalDiffeo f = from_family("exp", {a}, 2, n);
  IntervalDiffeo fi = invert(f);
  for (int i = 0; i <= n; ++i) {
    double y = static_cast<double>(i) / n;
    CHECK(std::fabs(fi.jets[static_cast<size_t>(i)][0] - std::log1p(c * y) / a) <= TOL_NUM);
  }
}

TEST_CASE("rho: metric basics and a dense-grid brute-force cross-check") {
  int n = 512;
  IntervalDiffeo f = from_family("exp", {1.0}, 1, n);
  IntervalDiffeo e = identity_diffeo(1, n);
  CHECK(rho(f, f, 1) == 0.0);
  CHECK(rho(f, e, 1) == rho(e, f, 1));

  IntervalDiffeo fd = from_family("exp", {1.0}, 1, 10 * n);
  IntervalDiffeo ed = identity_diffeo(1, 10 * n);
  CHECK(std::fabs(rho(f, e, 1) - rho(fd, ed, 1)) <= 1e-4);
}

TEST_CASE("dk: exp family closed forms") {
  int n = 256;
  IntervalDiffeo e = identity_diffeo(3, n);
  IntervalDiffeo fa = from_family("exp", {2.3}, 3, n);
  IntervalDiffeo fb = from_family("exp", {-1.1}, 3, n);
  CHECK(dk(fa, e, 1) == doctest::Approx(2.3).epsilon(1e-13));
  CHECK(dk(fa, fb, 1) == doctest::Approx(3.4).epsilon(1e-13));
  CHECK(dk(fa, e, 3) == doctest::Approx(2.3).epsilon(1e-13));
  CHECK(dk(fa, fb, 1) == dk(fb, fa, 1));
}

TEST_CASE("d_1 right-invariance on the interval") {
  int n = 1024;
  Sampler rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    IntervalDiffeo f = rng.interval_member(1, n);
    IntervalDiffeo g = rng.interval_member(1, n);
    IntervalDiffeo h = rng.interval_member(1, n);
    CHECK(std::fabs(dk(compose(f, h), compose(g, h), 1) - dk(f, g, 1)) <= TOL_NUM);
  }
}

TEST_CASE("cocycle identity") {
  int n = 1024;
  Sampler rng(11);
  for (int rep = 0; rep < 6; ++rep) {
    IntervalDiffeo f = rng.interval_member(1, n);
    IntervalDiffeo h = rng.interval_member(1, n);
    IntervalDiffeo hinv = invert(h);
    GridFunction lhs = phi(compose(f, hinv), 1);
    GridFunction pf = phi(f, 1), ph = phi(h, 1);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      double y = hinv.jets[static_cast<size_t>(i)][0];
      worst = std::max(worst, std::fabs(lhs.values[static_cast<size_t>(i)] -
                                        (eval(pf, y) - eval(ph, y))));
    }
    CHECK(worst <= TOL_NUM);
  }
}

TEST_CASE("derivative bounds") {
  int n = 512;
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    for (double sign : {1.0, -1.0}) {
      IntervalDiffeo f = from_family("exp", {sign * 0.95 * delta}, 1, n);
      REQUIRE(dk(f, identity_diffeo(1, n), 1) < delta);
      IntervalDiffeo fi = invert(f);
      for (const IntervalDiffeo* d : {&f, &fi}) {
        for (int i = 0; i <= n; ++i) {
          double fp = d->jets[static_cast<size_t>(i)][1];
          CHECK(fp >= std::exp(-2.0 * delta) - TOL_NUM);
          CHECK(fp <= std::exp(2.0 * delta) + TOL_NUM);
        }
      }
    }
  }
}

TEST_CASE("f'(0) equals the reciprocal of the integral of exp(F)") {
  int n = 2048;
  double a = 1.3;
  IntervalDiffeo f = from_phi1(SmoothFunction::linear(a), 1, n);
  // dense independent quadrature of exp(a x) on a 10x grid (trapezoid)
  int m = 10 * n;
  double integral = 0.0;
  for (int i = 0; i < m; ++i) {
    double x0 = static_cast<double>(i) / m, x1 = static_cast<double>(i + 1) / m;
    integral += 0.5 * (std::exp(a * x0) + std::exp(a * x1)) / m;
  }
  CHECK(std::fabs(f.jets[0][1] - 1.0 / integral) <= TOL_NUM);
}

TEST_CASE("Lipschitz chain at the identity") {
  int n = 512;
  Sampler rng(13);
  for (int k = 2; k <= K_MAX; ++k) {
    IntervalDiffeo e = identity_diffeo(k, n);
    for (int rep = 0; rep < 5; ++rep) {
      IntervalDiffeo f = rng.interval_member_moderate(k, n);
      CHECK(dk(f, e, k - 1) <= 2.0 * dk(f, e, k) + TOL_NUM);
    }
  }
}

TEST_CASE("pseudometric axioms for d_k") {
  int n = 512;
  Sampler rng(17);
  for (int k : {1, 2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      IntervalDiffeo f = rng.interval_member_moderate(k, n);
      IntervalDiffeo g = rng.interval_member_moderate(k, n);
      IntervalDiffeo h = rng.interval_member_moderate(k, n);
      CHECK(dk(f, g, k) == dk(g, f, k));
      CHECK(dk(f, g, k) <= dk(f, h, k) + dk(h, g, k) + TOL_NUM);
      CHECK(dk(f, f, k) == 0.0);
    }
  }
}
