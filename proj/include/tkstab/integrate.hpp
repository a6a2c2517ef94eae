#pragma once

#include <vector>

#include "tkstab/polynomial.hpp"
#include "tkstab/polytope.hpp"

namespace tkstab {

/// Exact integral of p over a simplex: affine pullback to the standard
/// simplex and the closed-form monomial integral
///   int_{std simplex} y^beta dy = (prod beta_j!) / (m + |beta|)!
/// scaled by |det J|.
inline Rat integrate_over_simplex(const Simplex& s, const Polynomial& p) {
  const int n = static_cast<int>(s.verts.size()) - 1;
  RatMat jac(n, RatVec(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) jac[i][j] = s.verts[j + 1][i] - s.verts[0][i];
  Rat detj = determinant(jac);
  if (detj == 0) return Rat(0);
  // x_i = v0_i + sum_j jac[i][j] y_j
  Polynomial q = p.compose_affine(jac, s.verts[0]);
  Rat total = 0;
  for (const auto& [m, c] : q.terms()) {
    Rat num = 1;
    int deg = 0;
    for (int e : m) {
      for (int k = 2; k <= e; ++k) num *= k;
      deg += e;
    }
    Rat den = 1;
    for (int k = 2; k <= n + deg; ++k) den *= k;
    total += c * num / den;
  }
  return total * abs(detj);
}

/// Exact integral of p over P with Lebesgue measure dx.
inline Rat integrate_poly(const Polytope& p, const Polynomial& q) {
  Rat total = 0;
  for (const auto& s : triangulate(p)) total += integrate_over_simplex(s, q);
  return total;
}

inline Rat volume(const Polytope& p) {
  return integrate_poly(p, Polynomial::constant(p.dim(), Rat(1)));
}

/// Exact integral of p over facet i of P with the lattice boundary measure:
/// Euclidean (n-1)-measure divided by the Euclidean length of the primitive
/// normal. Substituting the facet equation for the coordinate with the
/// largest |normal component| turns this into a Lebesgue integral over the
/// projected polytope divided by |l_k| -- rational throughout, since the
/// normal-length factors cancel against the graph-area element.
inline Rat integrate_facet(const Polytope& p, int facet_idx, const Polynomial& q) {
  const int n = p.dim();
  const auto& f = p.facets()[facet_idx];
  if (n == 1) {
    // facet is the single vertex on it; |l| = 1 for a primitive 1-d normal
    const RatVec& v = p.vertices()[p.facet_vertices()[facet_idx][0]];
    return q.eval(v);
  }
  auto chart = facet_chart(p, facet_idx);
  Polynomial sub = q.eliminate_var(chart.drop, chart.sub_coeffs, chart.sub_const);
  Rat val = integrate_poly(*chart.region, sub);
  return val / Rat(abs(f.normal[chart.drop]));
}

/// Exact integral of p over all of boundary(P) with the lattice measure.
inline Rat integrate_boundary(const Polytope& p, const Polynomial& q) {
  Rat total = 0;
  for (size_t i = 0; i < p.facets().size(); ++i)
    total += integrate_facet(p, static_cast<int>(i), q);
  return total;
}

inline Rat boundary_mass(const Polytope& p) {
  return integrate_boundary(p, Polynomial::constant(p.dim(), Rat(1)));
}

}  // namespace tkstab
