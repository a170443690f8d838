#pragma once

#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffgeo/rational.hpp"

namespace diffgeo {

// Variable tags for the formal calculus.  X_i stands for the i-th
// derivative of a function (i >= 1); Y_j stands for the value of phi_j
// (j >= 2).  Formal d/dx shifts the index of either kind by one.
struct Var {
  char kind = 'X';  // 'X' or 'Y'
  int index = 1;

  auto operator<=>(const Var&) const = default;

  std::string name() const { return std::string(1, kind) + std::to_string(index); }
};

inline Var X(int i) { return Var{'X', i}; }
inline Var Y(int j) { return Var{'Y', j}; }

// Multivariate polynomial with exact rational coefficients.  Monomials map
// variables to positive exponents; zero coefficients are never stored.
class FormalPoly {
 public:
  using Monomial = std::map<Var, int>;

  FormalPoly() = default;

  static FormalPoly constant(Rational c) {
    FormalPoly p;
    if (!c.is_zero()) p.terms_[Monomial{}] = c;
    return p;
  }

  static FormalPoly variable(Var v) {
    FormalPoly p;
    p.terms_[Monomial{{v, 1}}] = Rational(1);
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Monomial& m, Rational c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend FormalPoly operator+(const FormalPoly& a, const FormalPoly& b) {
    FormalPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }

  friend FormalPoly operator-(const FormalPoly& a, const FormalPoly& b) {
    FormalPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }

  friend FormalPoly operator*(const FormalPoly& a, const FormalPoly& b) {
    FormalPoly r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [v, e] : mb) m[v] += e;
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  friend FormalPoly operator*(Rational c, const FormalPoly& a) {
    FormalPoly r;
    for (const auto& [m, cc] : a.terms_) r.add_term(m, c * cc);
    return r;
  }

  friend bool operator==(const FormalPoly& a, const FormalPoly& b) {
    return a.terms_ == b.terms_;
  }

  FormalPoly partial(Var v) const {
    FormalPoly r;
    for (const auto& [m, c] : terms_) {
      auto it = m.find(v);
      if (it == m.end()) continue;
      Monomial d = m;
      if (it->second == 1)
        d.erase(v);
      else
        d[v] = it->second - 1;
      r.add_term(d, c * Rational(it->second));
    }
    return r;
  }

  std::set<Var> vars_used() const {
    std::set<Var> s;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) s.insert(v);
    return s;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c.str();
      for (const auto& [v, e] : m) {
        os << "*" << v.name();
        if (e > 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  std::map<Monomial, Rational> terms_;
};

// Formal d/dx: sum over variables of (dp/dv) * shift(v), where the shift
// sends X_i to X_{i+1} and Y_j to Y_{j+1}.
inline FormalPoly formal_derivative(const FormalPoly& p) {
  FormalPoly r;
  for (Var v : p.vars_used()) {
    FormalPoly d = p.partial(v);
    if (d.is_zero()) continue;
    r = r + d * FormalPoly::variable(Var{v.kind, v.index + 1});
  }
  return r;
}

// f^(k) = Q_k(f', ..., f^(k-1), phi_2(f), ..., phi_k(f)).
// Base Q_2 = X_1*Y_2 (f'' = f' phi_2(f)); each step is one formal derivative.
inline FormalPoly build_Q(int k) {
  if (k < 2) throw std::domain_error("build_Q: k must be >= 2");
  FormalPoly q = FormalPoly::variable(X(1)) * FormalPoly::variable(Y(2));
  for (int i = 2; i < k; ++i) q = formal_derivative(q);
  return q;
}

// (g^{-1})^(k) = [R_k(g', ..., g^(k)) / (g')^{2k-1}] o g^{-1}.
// Base R_1 = 1; the quotient rule gives
//   R_{k+1} = D(R_k) * X_1 - (2k-1) * R_k * X_2,
// with the denominator exponent tracked implicitly as 2k+1.
inline FormalPoly build_R(int k) {
  if (k < 1) throw std::domain_error("build_R: k must be >= 1");
  FormalPoly r = FormalPoly::constant(Rational(1));
  for (int i = 1; i < k; ++i) {
    r = formal_derivative(r) * FormalPoly::variable(X(1)) -
        Rational(2 * i - 1) * (r * FormalPoly::variable(X(2)));
  }
  return r;
}

// Coefficients of the expansion of phi_k(f h^{-1}) in terms of the
// differences [phi_m(f) - phi_m(h)] o h^{-1}.  Returned in order
// P^k_2, ..., P^k_k; the variables stand for derivatives of h^{-1}.
// Level recursion: P^{k+1}_j = P^k_j * X_1 + D(P^k_{j-1}), with
// out-of-range P treated as zero.
inline std::vector<FormalPoly> build_P(int k) {
  if (k < 2) throw std::domain_error("build_P: k must be >= 2");
  std::vector<FormalPoly> level{FormalPoly::variable(X(1))};  // P^2_2 = X_1
  for (int cur = 2; cur < k; ++cur) {
    std::vector<FormalPoly> next(level.size() + 1);
    for (size_t idx = 0; idx < next.size(); ++idx) {
      // next[idx] holds P^{cur+1}_{idx+2}
      FormalPoly acc;
      if (idx < level.size())
        acc = acc + level[idx] * FormalPoly::variable(X(1));
      if (idx >= 1) acc = acc + formal_derivative(level[idx - 1]);
      next[idx] = acc;
    }
    level = std::move(next);
  }
  return level;
}

// Evaluate with long double accumulation; the exact coefficient is applied
// per term and the sum converts to double once at the end.
inline double eval_poly(const FormalPoly& p, const std::map<Var, double>& assignment) {
  long double acc = 0.0L;
  for (const auto& [m, c] : p.terms()) {
    long double term = static_cast<long double>(c.num());
    for (const auto& [v, e] : m) {
      auto it = assignment.find(v);
      if (it == assignment.end())
        throw std::invalid_argument("eval_poly: missing variable " + v.name());
      for (int i = 0; i < e; ++i) term *= it->second;
    }
    acc += term / static_cast<long double>(c.den());
  }
  return static_cast<double>(acc);
}

}  // namespace diffgeo
