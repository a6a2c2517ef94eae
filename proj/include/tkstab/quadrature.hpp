#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tkstab/polytope.hpp"

namespace tkstab {

struct QuadConfig {
  double abs_tol = 1e-6;
  int max_depth = 28;        // dyadic halvings of the bounding box
  int gauss_order = 7;       // tensor Gauss order on accepted cells
  long long max_cells = 4000000;
};

namespace quad_detail {

/// Gauss-Legendre nodes/weights on [0, 1] (weights sum to 1), computed once
/// per order by Newton iteration on the Legendre polynomial.
inline const std::vector<std::pair<double, double>>& gauss_rule(int order) {
  static std::vector<std::vector<std::pair<double, double>>> cache(32);
  if (order < 1 || order > 30) throw std::invalid_argument("gauss order out of range");
  auto& rule = cache[order];
  if (!rule.empty()) return rule;
  for (int i = 0; i < order; ++i) {
    // initial guess (Chebyshev-like), Newton on P_order
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p0 = 0, p1 = 0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < order; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * x * p1 - k * p2) / (k + 1);
      }
      double dp = order * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < order; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2 * k + 1) * x * p1 - k * p2) / (k + 1);
    }
    double dp = order * (x * p0 - p1) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.emplace_back(0.5 * (x + 1.0), 0.5 * w);
  }
  std::sort(rule.begin(), rule.end());
  return rule;
}

/// Tensor Gauss over an axis-aligned box given as doubles.
inline double gauss_box(const VecD& lo, const VecD& hi,
                        const std::function<double(const VecD&)>& f, int order) {
  const int m = static_cast<int>(lo.size());
  const auto& rule = gauss_rule(order);
  std::vector<int> idx(m, 0);
  VecD x(m);
  double vol = 1.0;
  for (int i = 0; i < m; ++i) vol *= hi[i] - lo[i];
  double sum = 0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      x[i] = lo[i] + (hi[i] - lo[i]) * rule[idx[i]].first;
      w *= rule[idx[i]].second;
    }
    sum += w * f(x);
    int k = m - 1;
    while (k >= 0 && idx[k] == order - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return sum * vol;
}

/// Duffy-collapsed tensor Gauss over a simplex (vertices as doubles).
inline double gauss_simplex(const std::vector<VecD>& verts,
                            const std::function<double(const VecD&)>& f, int order) {
  const int m = static_cast<int>(verts.size()) - 1;
  const auto& rule = gauss_rule(order);
  // |det J| of the edge matrix
  std::vector<VecD> jac(m, VecD(m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) jac[i][j] = verts[j + 1][i] - verts[0][i];
  double det = 1.0;
  {
    auto a = jac;
    for (int c = 0; c < m; ++c) {
      int piv = c;
      for (int r = c + 1; r < m; ++r)
        if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
      if (a[piv][c] == 0.0) return 0.0;
      std::swap(a[c], a[piv]);
      if (piv != c) det = -det;
      det *= a[c][c];
      for (int r = c + 1; r < m; ++r) {
        double fac = a[r][c] / a[c][c];
        for (int cc = c; cc < m; ++cc) a[r][cc] -= fac * a[c][cc];
      }
    }
  }
  det = std::abs(det);
  if (det == 0.0) return 0.0;

  std::vector<int> idx(m, 0);
  VecD t(m), y(m), x(m);
  double sum = 0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      t[i] = rule[idx[i]].first;
      w *= rule[idx[i]].second;
    }
    // Duffy map: y_k = t_k * prod_{j<k} (1 - t_j); jacobian prod (1-t_k)^{m-1-k}
    double rem = 1.0, djac = 1.0;
    for (int k = 0; k < m; ++k) {
      y[k] = t[k] * rem;
      rem *= 1.0 - t[k];
    }
    for (int k = 0; k < m - 1; ++k) djac *= std::pow(1.0 - t[k], m - 1 - k);
    for (int i = 0; i < m; ++i) {
      x[i] = verts[0][i];
      for (int j = 0; j < m; ++j) x[i] += jac[i][j] * y[j];
    }
    sum += w * djac * f(x);
    int k = m - 1;
    while (k >= 0 && idx[k] == order - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return sum * det;
}

enum class CellClass { Inside, Outside, Straddle };

/// Exact classification of an axis box against the polytope constraints.
/// min/max of <l, x> over the box are attained coordinatewise.
inline CellClass classify(const Polytope& p, const RatVec& lo, const RatVec& hi) {
  bool inside = true;
  for (const auto& f : p.facets()) {
    Rat mn = 0, mx = 0;
    for (int i = 0; i < p.dim(); ++i) {
      Rat li(f.normal[i]);
      if (li > 0) {
        mn += li * lo[i];
        mx += li * hi[i];
      } else {
        mn += li * hi[i];
        mx += li * lo[i];
      }
    }
    if (mn > f.offset) return CellClass::Outside;
    if (mx > f.offset) inside = false;
  }
  return inside ? CellClass::Inside : CellClass::Straddle;
}

struct AdaptiveIntegrator {
  const Polytope& p;
  const std::function<double(const VecD&)>& f;
  const QuadConfig& cfg;
  double total_vol;
  long long cells_used = 0;

  /// Exact clip of cell ∩ P at the refinement limit, integrated per simplex.
  /// Constraints already satisfied over the whole cell are dropped first;
  /// the intersection is unchanged and the vertex enumeration stays small.
  double clip_cell(const RatVec& lo, const RatVec& hi) {
    const int m = p.dim();
    std::vector<std::pair<RatVec, Rat>> hs;
    for (const auto& fct : p.facets()) {
      Rat mx = 0;
      for (int i = 0; i < m; ++i) {
        Rat li(fct.normal[i]);
        mx += li * (li > 0 ? hi[i] : lo[i]);
      }
      if (mx > fct.offset) hs.emplace_back(to_ratvec(fct.normal), fct.offset);
    }
    for (int i = 0; i < m; ++i) {
      RatVec up(m, Rat(0)), dn(m, Rat(0));
      up[i] = 1;
      dn[i] = -1;
      hs.emplace_back(up, hi[i]);
      hs.emplace_back(dn, -lo[i]);
    }
    auto clipped = Polytope::intersect_pruned(m, hs);
    if (!clipped) return 0.0;
    double sum = 0;
    for (const auto& s : triangulate(*clipped)) {
      std::vector<VecD> verts;
      for (const auto& v : s.verts) verts.push_back(to_doubles(v));
      sum += gauss_simplex(verts, f, cfg.gauss_order);
    }
    return sum;
  }

  double visit(const RatVec& lo, const RatVec& hi, int depth) {
    ++cells_used;
    auto cls = classify(p, lo, hi);
    if (cls == CellClass::Outside) return 0.0;
    bool budget_out = depth >= cfg.max_depth || cells_used > cfg.max_cells;

    // boundary cells refine geometrically toward dP, then clip exactly
    if (cls == CellClass::Straddle)
      return budget_out ? clip_cell(lo, hi) : split(lo, hi, depth);

    VecD lod = to_doubles(lo), hid = to_doubles(hi);
    double cell_vol = 1.0;
    for (size_t i = 0; i < lod.size(); ++i) cell_vol *= hid[i] - lod[i];
    // interior cell: accept when two Gauss orders agree within the local share
    double hi_est = gauss_box(lod, hid, f, cfg.gauss_order);
    if (budget_out) return hi_est;
    double lo_est = gauss_box(lod, hid, f, std::max(2, cfg.gauss_order - 2));
    double local_tol = 0.5 * cfg.abs_tol * cell_vol / total_vol;
    if (std::abs(hi_est - lo_est) <= local_tol) return hi_est;
    return split(lo, hi, depth);
  }

  double split(const RatVec& lo, const RatVec& hi, int depth) {
    const int m = p.dim();
    std::vector<int> bits(m, 0);
    double sum = 0;
    RatVec clo(m), chi(m);
    while (true) {
      for (int i = 0; i < m; ++i) {
        Rat mid = (lo[i] + hi[i]) / 2;
        if (bits[i] == 0) {
          clo[i] = lo[i];
          chi[i] = mid;
        } else {
          clo[i] = mid;
          chi[i] = hi[i];
        }
      }
      sum += visit(clo, chi, depth + 1);
      int k = m - 1;
      while (k >= 0 && bits[k] == 1) bits[k--] = 0;
      if (k < 0) break;
      ++bits[k];
    }
    return sum;
  }
};

}  // namespace quad_detail

/// Adaptive integration of f over P: dyadic cell refinement from the bounding
/// box with exact rational inside/outside classification, tensor Gauss on
/// interior cells, and exact clipping with per-simplex quadrature for
/// boundary cells at the depth limit. Deterministic (fixed traversal order).
inline double integrate_polytope_numeric(const Polytope& p,
                                         const std::function<double(const VecD&)>& f,
                                         const QuadConfig& cfg = {}) {
  auto [lo, hi] = p.bounding_box();
  double vol = 1.0;
  for (int i = 0; i < p.dim(); ++i) vol *= to_double(hi[i] - lo[i]);
  quad_detail::AdaptiveIntegrator integ{p, f, cfg, vol};
  return integ.visit(lo, hi, 0);
}

/// Numeric integral over facet i of P with the lattice boundary measure.
inline double integrate_facet_numeric(const Polytope& p, int facet_idx,
                                      const std::function<double(const VecD&)>& f,
                                      const QuadConfig& cfg = {}) {
  const int n = p.dim();
  if (n == 1) {
    const RatVec& v = p.vertices()[p.facet_vertices()[facet_idx][0]];
    return f(to_doubles(v));
  }
  auto chart = facet_chart(p, facet_idx);
  VecD sub_coeffs = to_doubles(chart.sub_coeffs);
  double sub_const = to_double(chart.sub_const);
  int drop = chart.drop;
  auto lifted = [&](const VecD& y) {
    VecD x(n);
    double xd = sub_const;
    for (int j = 0; j < n - 1; ++j) xd += sub_coeffs[j] * y[j];
    int jj = 0;
    for (int i = 0; i < n; ++i) x[i] = (i == drop) ? xd : y[jj++];
    return f(x);
  };
  double scale = 1.0 / std::abs(to_double(Rat(p.facets()[facet_idx].normal[drop])));
  return scale * integrate_polytope_numeric(*chart.region, lifted, cfg);
}

inline double integrate_boundary_numeric(const Polytope& p,
                                         const std::function<double(const VecD&)>& f,
                                         const QuadConfig& cfg = {}) {
  double sum = 0;
  for (size_t i = 0; i < p.facets().size(); ++i)
    sum += integrate_facet_numeric(p, static_cast<int>(i), f, cfg);
  return sum;
}

}  // namespace tkstab
