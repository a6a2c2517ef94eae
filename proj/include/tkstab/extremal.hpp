#pragma once

#include <stdexcept>

#include "tkstab/integrate.hpp"

namespace tkstab {

/// Affine function <grad, x> + cst.
struct AffineFunc {
  RatVec grad;
  Rat cst;

  Rat eval(const RatVec& x) const { return dot(grad, x) + cst; }
  double eval(const VecD& x) const {
    double r = to_double(cst);
    for (size_t i = 0; i < grad.size(); ++i) r += to_double(grad[i]) * x[i];
    return r;
  }
  Polynomial to_poly() const { return Polynomial::affine(grad, cst); }

  friend bool operator==(const AffineFunc& a, const AffineFunc& b) {
    return a.grad == b.grad && a.cst == b.cst;
  }
};

/// The extremal affine function s = rbar + theta and the moments defining it.
/// theta is normalized by int_P theta dx = 0, which makes the split unique
/// and gives rbar * vol = boundary_mass.
struct ExtremalData {
  AffineFunc s;
  Rat rbar;
  AffineFunc theta;
  Rat vol;
  Rat boundary_mass;
};

/// Solves the (n+1)x(n+1) rational moment system M c = b where M is the
/// Gram matrix of {1, x_1, ..., x_n} against dx and b holds the d-sigma
/// moments; the resulting affine s makes L vanish on all affine functions.
inline ExtremalData solve_extremal_affine(const Polytope& p) {
  const int n = p.dim();
  std::vector<Polynomial> basis;
  basis.push_back(Polynomial::constant(n, Rat(1)));
  for (int i = 0; i < n; ++i) basis.push_back(Polynomial::variable(n, i));

  RatMat m(n + 1, RatVec(n + 1));
  RatVec b(n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      m[i][j] = integrate_poly(p, basis[i] * basis[j]);
      m[j][i] = m[i][j];
    }
    b[i] = integrate_boundary(p, basis[i]);
  }

  auto c = solve_linear(m, b);
  if (!c) throw std::logic_error("extremal moment system singular on a valid polytope");

  ExtremalData ext;
  ext.s.grad.assign(c->begin() + 1, c->end());
  ext.s.cst = (*c)[0];
  ext.vol = m[0][0];
  ext.boundary_mass = b[0];

  // rbar = (int_P s dx) / vol; theta = s - rbar
  Rat int_s = ext.s.cst * ext.vol;
  for (int i = 0; i < n; ++i) int_s += ext.s.grad[i] * m[0][i + 1];
  ext.rbar = int_s / ext.vol;
  ext.theta.grad = ext.s.grad;
  ext.theta.cst = ext.s.cst - ext.rbar;
  return ext;
}

/// Donaldson functional on a polynomial integrand:
///   L(f) = int_{dP} f dsigma - int_P s f dx, exact.
inline Rat L_of_polynomial(const Polytope& p, const ExtremalData& ext, const Polynomial& f) {
  return integrate_boundary(p, f) - integrate_poly(p, ext.s.to_poly() * f);
}

/// True iff s > 0 everywhere on P; s is affine so vertex positivity suffices.
inline bool check_positivity(const ExtremalData& ext, const Polytope& p) {
  for (const auto& v : p.vertices())
    if (ext.s.eval(v) <= 0) return false;
  return true;
}

}  // namespace tkstab
