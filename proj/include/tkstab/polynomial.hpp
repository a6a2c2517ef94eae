#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "tkstab/rational.hpp"

namespace tkstab {

/// Multivariate polynomial with rational coefficients, stored as a sparse
/// exponent-vector -> coefficient map. Deterministic term order (lexicographic
/// on exponents) so that serialization and iteration are reproducible.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rat& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Monomial(nvars, 0)] = c;
    return p;
  }

  static Polynomial variable(int nvars, int i) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.terms_[m] = 1;
    return p;
  }

  static Polynomial monomial(int nvars, Monomial m, const Rat& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[std::move(m)] = c;
    return p;
  }

  /// c0 + sum_i coeffs[i] x_i
  static Polynomial affine(const RatVec& coeffs, const Rat& c0) {
    Polynomial p(static_cast<int>(coeffs.size()));
    if (c0 != 0) p.terms_[Monomial(p.nvars_, 0)] = c0;
    for (int i = 0; i < p.nvars_; ++i) {
      if (coeffs[i] == 0) continue;
      Monomial m(p.nvars_, 0);
      m[i] = 1;
      p.terms_[m] = coeffs[i];
    }
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rat>& terms() const { return terms_; }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int t = 0;
      for (int e : m) t += e;
      if (t > d) d = t;
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_vars(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  friend Polynomial operator*(const Rat& s, Polynomial p) {
    if (s == 0) return Polynomial(p.nvars_);
    for (auto& [m, c] : p.terms_) c *= s;
    return p;
  }

  Rat eval(const RatVec& x) const {
    Rat r = 0;
    for (const auto& [m, c] : terms_) {
      Rat t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      r += t;
    }
    return r;
  }

  double eval(const VecD& x) const {
    double r = 0;
    for (const auto& [m, c] : terms_) {
      double t = to_double(c);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      r += t;
    }
    return r;
  }

  Polynomial derivative(int i) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      d[i] -= 1;
      r.add_term(d, c * m[i]);
    }
    return r;
  }

  /// Substitutes x_i = t_i + sum_j M[i][j] y_j for every variable; the result
  /// is a polynomial in the y variables (count = M[i].size()).
  Polynomial compose_affine(const std::vector<RatVec>& mat, const RatVec& t) const {
    const int ny = mat.empty() ? 0 : static_cast<int>(mat[0].size());
    // Precompute powers of each substituted variable lazily.
    std::vector<std::vector<Polynomial>> powers(nvars_);
    for (int i = 0; i < nvars_; ++i)
      powers[i].push_back(Polynomial::constant(ny, Rat(1)));
    auto power = [&](int i, int e) -> const Polynomial& {
      while (static_cast<int>(powers[i].size()) <= e) {
        if (powers[i].size() == 1) {
          powers[i].push_back(Polynomial::affine(mat[i], t[i]));
        } else {
          powers[i].push_back(powers[i].back() * powers[i][1]);
        }
      }
      return powers[i][e];
    };
    Polynomial r(ny);
    for (const auto& [m, c] : terms_) {
      Polynomial term = Polynomial::constant(ny, c);
      for (int i = 0; i < nvars_; ++i)
        if (m[i] > 0) term = term * power(i, m[i]);
      r += term;
    }
    return r;
  }

  /// Eliminates variable k via x_k = cst + sum coeffs[j'] x_{j'} where j'
  /// ranges over the remaining variables in order. Result has nvars-1 vars.
  Polynomial eliminate_var(int k, const RatVec& coeffs, const Rat& cst) const {
    const int ny = nvars_ - 1;
    std::vector<RatVec> mat(nvars_, RatVec(ny, Rat(0)));
    RatVec t(nvars_, Rat(0));
    int jj = 0;
    for (int j = 0; j < nvars_; ++j) {
      if (j == k) continue;
      mat[j][jj] = 1;
      ++jj;
    }
    mat[k] = coeffs;
    t[k] = cst;
    return compose_affine(mat, t);
  }

 private:
  void check_vars(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::logic_error("polynomial arity mismatch");
  }
  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int nvars_;
  std::map<Monomial, Rat> terms_;
};

}  // namespace tkstab
