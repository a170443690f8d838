#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "diffgeo/config.hpp"

namespace diffgeo {

// Real function on [0,1] sampled on N+1 uniform nodes, optionally with
// derivative samples.  Row m of `derivs` holds f^(m+1) at the nodes, so a
// GridFunction with k rows is an order-k jet grid of its own values.
// Values are immutable by convention: every operation returns a new grid.
struct GridFunction {
  int n = 0;                                // panels; nodes x_i = i/n
  std::vector<double> values;               // size n+1
  std::vector<std::vector<double>> derivs;  // derivs[m-1][i] = f^(m)(x_i)

  int deriv_order() const { return static_cast<int>(derivs.size()); }
  double x(int i) const { return static_cast<double>(i) / n; }
};

inline void validate(const GridFunction& f) {
  if (f.n < 1) throw std::invalid_argument("GridFunction: need at least 2 nodes");
  if (static_cast<int>(f.values.size()) != f.n + 1)
    throw std::invalid_argument("GridFunction: values size must be n+1");
  for (double v : f.values)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
  for (const auto& row : f.derivs) {
    if (static_cast<int>(row.size()) != f.n + 1)
      throw std::invalid_argument("GridFunction: derivative row size must be n+1");
    for (double v : row)
      if (!std::isfinite(v))
        throw std::invalid_argument("GridFunction: non-finite derivative sample");
  }
}

// Closed-form jet source: given x and an order m, returns
// {f(x), f'(x), ..., f^(m)(x)}.  Used for analytic test families and as
// the input type of the coordinate inverse.
class SmoothFunction {
 public:
  using JetFn = std::function<std::vector<double>(double, int)>;

  SmoothFunction() = default;
  SmoothFunction(JetFn fn, int max_order) : fn_(std::move(fn)), max_order_(max_order) {}

  int max_order() const { return max_order_; }

  std::vector<double> jet(double x, int order) const {
    if (!fn_) throw std::logic_error("SmoothFunction: empty");
    if (order > max_order_)
      throw std::invalid_argument("SmoothFunction: jet order beyond declared maximum");
    std::vector<double> j = fn_(x, order);
    if (static_cast<int>(j.size()) != order + 1)
      throw std::logic_error("SmoothFunction: evaluator returned wrong jet length");
    for (double v : j)
      if (!std::isfinite(v)) throw std::domain_error("SmoothFunction: non-finite jet");
    return j;
  }

  double operator()(double x) const { return jet(x, 0)[0]; }

  static SmoothFunction zero() {
    return SmoothFunction(
        [](double, int m) { return std::vector<double>(static_cast<size_t>(m) + 1, 0.0); },
        K_MAX + 2);
  }

  // F(x) = a*x.
  static SmoothFunction linear(double a) {
    return SmoothFunction(
        [a](double x, int m) {
          std::vector<double> j(static_cast<size_t>(m) + 1, 0.0);
          j[0] = a * x;
          if (m >= 1) j[1] = a;
          return j;
        },
        K_MAX + 2);
  }

  SmoothFunction scaled(double s) const {
    JetFn base = fn_;
    return SmoothFunction(
        [base, s](double x, int m) {
          std::vector<double> j = base(x, m);
          for (double& v : j) v *= s;
          return j;
        },
        max_order_);
  }

 private:
  JetFn fn_;
  int max_order_ = 0;
};

namespace detail {

// Two-point quintic Hermite on a panel of width h, local coordinate u in [0,1].
inline double hermite5(double v0, double d0, double s0, double v1, double d1,
                       double s1, double u, double h) {
  double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  double H0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
  double H1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
  double H2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
  double K0 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
  double K1 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
  double K2 = 0.5 * (u3 - 2.0 * u4 + u5);
  return v0 * H0 + h * d0 * H1 + h * h * s0 * H2 + v1 * K0 + h * d1 * K1 +
         h * h * s1 * K2;
}

inline double hermite3(double v0, double d0, double v1, double d1, double u, double h) {
  double u2 = u * u, u3 = u2 * u;
  return v0 * (2.0 * u3 - 3.0 * u2 + 1.0) + h * d0 * (u3 - 2.0 * u2 + u) +
         v1 * (-2.0 * u3 + 3.0 * u2) + h * d1 * (u3 - u2);
}

// Cubic Lagrange through four consecutive uniform nodes; s is the position
// in units of h measured from the first of the four nodes.
inline double lagrange4(double y0, double y1, double y2, double y3, double s) {
  double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3;
}

inline double row_sample(const GridFunction& f, int m, int i) {
  return m == 0 ? f.values[static_cast<size_t>(i)]
                : f.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)];
}

// Interpolate derivative row m at an arbitrary point, using rows m+1, m+2
// as Hermite data when stored.  Exact at grid nodes.
inline double eval_row(const GridFunction& f, int m, double x) {
  int nearest = static_cast<int>(std::llround(x * f.n));
  if (nearest >= 0 && nearest <= f.n && x == f.x(nearest))
    return row_sample(f, m, nearest);

  int i = static_cast<int>(std::floor(x * f.n));
  if (i < 0) i = 0;
  if (i > f.n - 1) i = f.n - 1;
  double u = x * f.n - i;
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  double h = 1.0 / f.n;

  int depth = f.deriv_order() - m;
  if (depth >= 2) {
    return hermite5(row_sample(f, m, i), row_sample(f, m + 1, i),
                    row_sample(f, m + 2, i), row_sample(f, m, i + 1),
                    row_sample(f, m + 1, i + 1), row_sample(f, m + 2, i + 1), u, h);
  }
  if (depth == 1) {
    return hermite3(row_sample(f, m, i), row_sample(f, m + 1, i),
                    row_sample(f, m, i + 1), row_sample(f, m + 1, i + 1), u, h);
  }
  if (f.n < 3) {  // not enough nodes for a cubic; fall back to linear
    return row_sample(f, m, i) * (1.0 - u) + row_sample(f, m, i + 1) * u;
  }
  int j0 = i - 1;
  if (j0 < 0) j0 = 0;
  if (j0 > f.n - 3) j0 = f.n - 3;
  double s = x * f.n - j0;
  return lagrange4(row_sample(f, m, j0), row_sample(f, m, j0 + 1),
                   row_sample(f, m, j0 + 2), row_sample(f, m, j0 + 3), s);
}

}  // namespace detail

// Piecewise interpolation of the sampled function: quintic Hermite when two
// derivative rows are stored, cubic Hermite for one, plain cubic otherwise.
// Exact at grid nodes.
inline double eval(const GridFunction& f, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("eval: x outside [0,1]");
  return detail::eval_row(f, 0, x);
}

// Node-wise max of |f|.  A lower bound of the true sup; exact whenever the
// max is attained at a node.  All tolerance budgets assume this convention.
inline double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

// I(f,b)(x) = int_0^x f + b, evaluated cumulatively with a per-panel
// Simpson rule (midpoints interpolated from the stored jet data).  The
// result's value at node 0 is b exactly, and it inherits f's samples as
// shifted derivative rows.
inline GridFunction antiderivative(const GridFunction& f, double b) {
  if (f.n < 2) throw std::invalid_argument("antiderivative: need at least 3 nodes");
  GridFunction r;
  r.n = f.n;
  r.values.resize(static_cast<size_t>(f.n) + 1);
  r.values[0] = b;
  double h = 1.0 / f.n;
  double acc = b;
  for (int i = 0; i < f.n; ++i) {
    double mid = detail::eval_row(f, 0, (i + 0.5) / f.n);
    acc += h / 6.0 * (f.values[static_cast<size_t>(i)] + 4.0 * mid +
                      f.values[static_cast<size_t>(i) + 1]);
    r.values[static_cast<size_t>(i) + 1] = acc;
  }
  r.derivs.reserve(f.derivs.size() + 1);
  r.derivs.push_back(f.values);
  for (const auto& row : f.derivs) r.derivs.push_back(row);
  return r;
}

// Fourth-order finite differences: central in the interior, one-sided
// five-point stencils at the boundary.  O(h^4) on smooth data.
inline GridFunction finite_difference_derivative(const GridFunction& f) {
  if (f.n < 4) throw std::invalid_argument("finite_difference_derivative: need N >= 4");
  GridFunction r;
  r.n = f.n;
  r.values.resize(static_cast<size_t>(f.n) + 1);
  const std::vector<double>& y = f.values;
  double h = 1.0 / f.n;
  int n = f.n;
  r.values[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) /
                (12.0 * h);
  r.values[1] =
      (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
  for (int i = 2; i <= n - 2; ++i) {
    r.values[static_cast<size_t>(i)] =
        (y[static_cast<size_t>(i) - 2] - 8.0 * y[static_cast<size_t>(i) - 1] +
         8.0 * y[static_cast<size_t>(i) + 1] - y[static_cast<size_t>(i) + 2]) /
        (12.0 * h);
  }
  size_t un = static_cast<size_t>(n);
  r.values[un - 1] =
      (3.0 * y[un] + 10.0 * y[un - 1] - 18.0 * y[un - 2] + 6.0 * y[un - 3] - y[un - 4]) /
      (12.0 * h);
  r.values[un] = (25.0 * y[un] - 48.0 * y[un - 1] + 36.0 * y[un - 2] -
                  16.0 * y[un - 3] + 3.0 * y[un - 4]) /
                 (12.0 * h);
  return r;
}

// Sample a closed-form function (value plus `rows` derivative rows).
inline GridFunction grid_from_smooth(const SmoothFunction& f, int n, int rows) {
  GridFunction g;
  g.n = n;
  g.values.resize(static_cast<size_t>(n) + 1);
  g.derivs.assign(static_cast<size_t>(rows), std::vector<double>(static_cast<size_t>(n) + 1));
  for (int i = 0; i <= n; ++i) {
    std::vector<double> jet = f.jet(g.x(i), rows);
    g.values[static_cast<size_t>(i)] = jet[0];
    for (int m = 1; m <= rows; ++m)
      g.derivs[static_cast<size_t>(m) - 1][static_cast<size_t>(i)] =
          jet[static_cast<size_t>(m)];
  }
  validate(g);
  return g;
}

inline GridFunction grid_sampled(int n, const std::function<double(double)>& fn) {
  GridFunction g;
  g.n = n;
  g.values.resize(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g.values[static_cast<size_t>(i)] = fn(g.x(i));
  validate(g);
  return g;
}

inline GridFunction grid_scale(const GridFunction& f, double s) {
  GridFunction r = f;
  for (double& v : r.values) v *= s;
  for (auto& row : r.derivs)
    for (double& v : row) v *= s;
  return r;
}

inline GridFunction grid_sub(const GridFunction& a, const GridFunction& b) {
  if (a.n != b.n) throw std::invalid_argument("grid_sub: mismatched grids");
  GridFunction r;
  r.n = a.n;
  r.values.resize(a.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
  return r;
}

}  // namespace diffgeo
