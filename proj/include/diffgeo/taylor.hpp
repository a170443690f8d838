#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace diffgeo {

// Truncated Taylor series: c[i] = f^(i)(x0) / i!.  This is the jet
// propagation engine behind composition, inversion jets, and the
// log-derivative maps.  All recurrences are the standard convolution
// forms; everything is exact up to roundoff.
struct Series {
  std::vector<double> c;

  Series() = default;
  explicit Series(int order) : c(static_cast<size_t>(order) + 1, 0.0) {}
  int order() const { return static_cast<int>(c.size()) - 1; }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

namespace detail {
inline double factorial(int n) {
  static const double table[] = {1.0,     1.0,      2.0,       6.0,
                                 24.0,    120.0,    720.0,     5040.0,
                                 40320.0, 362880.0, 3628800.0, 39916800.0};
  if (n >= 0 && n < 12) return table[n];
  double f = table[11];
  for (int i = 12; i <= n; ++i) f *= i;
  return f;
}
}  // namespace detail

// jet[i] = f^(i)(x0), i = 0..m  <->  series coefficients f^(i)/i!.
inline Series series_from_jet(const std::vector<double>& jet) {
  Series s(static_cast<int>(jet.size()) - 1);
  for (size_t i = 0; i < jet.size(); ++i)
    s.c[i] = jet[i] / detail::factorial(static_cast<int>(i));
  return s;
}

inline std::vector<double> jet_from_series(const Series& s) {
  std::vector<double> jet(s.c.size());
  for (size_t i = 0; i < s.c.size(); ++i)
    jet[i] = s.c[i] * detail::factorial(static_cast<int>(i));
  return jet;
}

inline Series series_truncate(const Series& a, int order) {
  Series r(order);
  for (int i = 0; i <= order && i <= a.order(); ++i) r[i] = a[i];
  return r;
}

inline Series series_add(const Series& a, const Series& b, int order) {
  Series r(order);
  for (int i = 0; i <= order; ++i) {
    double v = 0.0;
    if (i <= a.order()) v += a[i];
    if (i <= b.order()) v += b[i];
    r[i] = v;
  }
  return r;
}

inline Series series_scale(const Series& a, double s) {
  Series r = a;
  for (double& v : r.c) v *= s;
  return r;
}

inline Series series_mul(const Series& a, const Series& b, int order) {
  Series r(order);
  for (int i = 0; i <= order; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      if (j > a.order() || i - j > b.order()) continue;
      acc += a[j] * b[i - j];
    }
    r[i] = acc;
  }
  return r;
}

inline Series series_recip(const Series& a, int order) {
  if (a[0] == 0.0) throw std::domain_error("series_recip: zero constant term");
  Series r(order);
  r[0] = 1.0 / a[0];
  for (int i = 1; i <= order; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= i; ++j) {
      if (j > a.order()) break;
      acc += a[j] * r[i - j];
    }
    r[i] = -acc / a[0];
  }
  return r;
}

inline Series series_div(const Series& a, const Series& b, int order) {
  return series_mul(a, series_recip(b, order), order);
}

// v = exp(u):  m v_m = sum_{i=1..m} i u_i v_{m-i}.
inline Series series_exp(const Series& u, int order) {
  Series v(order);
  v[0] = std::exp(u[0]);
  for (int m = 1; m <= order; ++m) {
    double acc = 0.0;
    for (int i = 1; i <= m; ++i) {
      if (i > u.order()) break;
      acc += i * u[i] * v[m - i];
    }
    v[m] = acc / m;
  }
  return v;
}

// w = log(u), u_0 > 0:  m u_m = sum_{i=1..m} i w_i u_{m-i}.
inline Series series_log(const Series& u, int order) {
  if (u[0] <= 0.0) throw std::domain_error("series_log: non-positive constant term");
  Series w(order);
  w[0] = std::log(u[0]);
  for (int m = 1; m <= order; ++m) {
    double acc = 0.0;
    for (int i = 1; i < m; ++i) acc += i * w[i] * (m - i <= u.order() ? u[m - i] : 0.0);
    double um = m <= u.order() ? u[m] : 0.0;
    w[m] = (m * um - acc) / (m * u[0]);
  }
  return w;
}

// s = sin(u), c = cos(u):  coupled first-order recurrences.
inline void series_sin_cos(const Series& u, int order, Series& s, Series& c) {
  s = Series(order);
  c = Series(order);
  s[0] = std::sin(u[0]);
  c[0] = std::cos(u[0]);
  for (int m = 1; m <= order; ++m) {
    double as = 0.0, ac = 0.0;
    for (int i = 1; i <= m; ++i) {
      double ui = i <= u.order() ? u[i] : 0.0;
      as += i * ui * c[m - i];
      ac += i * ui * s[m - i];
    }
    s[m] = as / m;
    c[m] = -ac / m;
  }
}

// a(b(t)) truncated; requires b_0 = 0.  Horner over truncated products.
inline Series series_compose(const Series& a, const Series& b, int order) {
  if (b[0] != 0.0)
    throw std::invalid_argument("series_compose: inner constant term must vanish");
  Series r(order);
  for (int i = std::min(a.order(), order); i >= 0; --i) {
    r = series_mul(r, b, order);
    r[0] += a[i];
  }
  return r;
}

}  // namespace diffgeo
