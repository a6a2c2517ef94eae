#pragma once

// Test-only numeric oracles, deliberately independent of the library's
// integration path: no triangulation, no rational arithmetic, no monomial
// formulas. Integrals are computed by recursive coordinate slicing with
// adaptive Simpson in plain doubles; slice bounds come from a small
// double-precision vertex enumeration over the constraint system.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tkstab/extremal.hpp"
#include "tkstab/polytope.hpp"

namespace oracles {

using tkstab::VecD;

struct NumRegion {
  int dim;
  std::vector<VecD> normals;  // <normal, x> <= offset
  VecD offsets;
};

inline NumRegion region_of(const tkstab::Polytope& p) {
  NumRegion r;
  r.dim = p.dim();
  for (const auto& f : p.facets()) {
    VecD n(r.dim);
    for (int i = 0; i < r.dim; ++i) n[i] = tkstab::to_double(tkstab::Rat(f.normal[i]));
    r.normals.push_back(std::move(n));
    r.offsets.push_back(tkstab::to_double(f.offset));
  }
  return r;
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      const std::vector<double>& breaks) {
  if (b - a < 1e-14) return 0.0;
  std::vector<double> cuts{a, b};
  for (double c : breaks)
    if (c > a + 1e-13 && c < b - 1e-13) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo < 1e-14) continue;
    double mid = 0.5 * (lo + hi);
    total += adaptive_simpson(f, lo, hi, f(lo), f(mid), f(hi),
                              tol * (hi - lo) / (b - a), 48);
  }
  return total;
}

/// Vertices of the region by brute force over dim-subsets of constraints,
/// solved in doubles.
inline std::vector<VecD> num_vertices(const NumRegion& r) {
  std::vector<VecD> verts;
  const int n = r.dim, d = static_cast<int>(r.normals.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (d < n) return verts;
  while (true) {
    // solve the n x n system with Gaussian elimination in doubles
    std::vector<VecD> a(n, VecD(n));
    VecD b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = r.normals[idx[i]];
      b[i] = r.offsets[idx[i]];
    }
    bool ok = true;
    for (int c = 0; c < n && ok; ++c) {
      int piv = c;
      for (int rr = c + 1; rr < n; ++rr)
        if (std::abs(a[rr][c]) > std::abs(a[piv][c])) piv = rr;
      if (std::abs(a[piv][c]) < 1e-11) {
        ok = false;
        break;
      }
      std::swap(a[c], a[piv]);
      std::swap(b[c], b[piv]);
      for (int rr = 0; rr < n; ++rr) {
        if (rr == c) continue;
        double f = a[rr][c] / a[c][c];
        for (int cc = c; cc < n; ++cc) a[rr][cc] -= f * a[c][cc];
        b[rr] -= f * b[c];
      }
    }
    if (ok) {
      VecD x(n);
      for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
      bool feas = true;
      for (int j = 0; j < d && feas; ++j) {
        double v = 0;
        for (int i = 0; i < n; ++i) v += r.normals[j][i] * x[i];
        if (v > r.offsets[j] + 1e-9) feas = false;
      }
      if (feas) verts.push_back(std::move(x));
    }
    int k = n - 1;
    while (k >= 0 && idx[k] == d - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return verts;
}

inline NumRegion slice_first(const NumRegion& r, double t) {
  NumRegion s;
  s.dim = r.dim - 1;
  for (size_t j = 0; j < r.normals.size(); ++j) {
    VecD a(r.normals[j].begin() + 1, r.normals[j].end());
    double b = r.offsets[j] - r.normals[j][0] * t;
    bool zero = true;
    for (double v : a)
      if (v != 0) zero = false;
    if (zero) continue;  // either vacuous or emptiness; handled via bounds
    s.normals.push_back(std::move(a));
    s.offsets.push_back(b);
  }
  return s;
}

}  // namespace detail

/// Integral of f over the region; `kinks` are hyperplanes (a, c) where the
/// integrand may have creases (integration splits there). Recursion slices
/// on the first remaining coordinate.
inline double integrate_region(const NumRegion& r, const std::function<double(const VecD&)>& f,
                               const std::vector<std::pair<VecD, double>>& kinks, double tol) {
  if (r.dim == 1) {
    double lo = -1e30, hi = 1e30;
    for (size_t j = 0; j < r.normals.size(); ++j) {
      double a = r.normals[j][0], b = r.offsets[j];
      if (a > 0) hi = std::min(hi, b / a);
      if (a < 0) lo = std::max(lo, b / a);
    }
    if (hi <= lo) return 0.0;
    std::vector<double> breaks;
    for (const auto& [ka, kc] : kinks)
      if (std::abs(ka[0]) > 1e-12) breaks.push_back(kc / ka[0]);
    return detail::simpson([&](double t) { return f(VecD{t}); }, lo, hi, tol, breaks);
  }
  auto verts = detail::num_vertices(r);
  if (verts.empty()) return 0.0;
  double lo = verts[0][0], hi = verts[0][0];
  std::vector<double> breaks;
  for (const auto& v : verts) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
    breaks.push_back(v[0]);
  }
  auto g = [&](double t) {
    NumRegion s = detail::slice_first(r, t);
    std::vector<std::pair<VecD, double>> sub_kinks;
    for (const auto& [ka, kc] : kinks) {
      VecD a(ka.begin() + 1, ka.end());
      bool zero = true;
      for (double v : a)
        if (v != 0) zero = false;
      if (!zero) sub_kinks.emplace_back(std::move(a), kc - ka[0] * t);
    }
    return integrate_region(
        s, [&](const VecD& y) {
          VecD x(r.dim);
          x[0] = t;
          for (int i = 1; i < r.dim; ++i) x[i] = y[i - 1];
          return f(x);
        },
        sub_kinks, tol / std::max(1.0, hi - lo));
  };
  return detail::simpson(g, lo, hi, tol, breaks);
}

/// Boundary integral with the lattice measure: per facet, substitute the
/// facet equation for the coordinate with the largest |normal component|
/// (the definition of d sigma), then slice-integrate the projection.
inline double integrate_boundary_region(const tkstab::Polytope& p,
                                        const std::function<double(const VecD&)>& f,
                                        const std::vector<std::pair<VecD, double>>& kinks,
                                        double tol) {
  const int n = p.dim();
  NumRegion r = region_of(p);
  double total = 0;
  for (size_t fi = 0; fi < r.normals.size(); ++fi) {
    const VecD& l = r.normals[fi];
    int k = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(l[i]) > std::abs(l[k])) k = i;
    if (n == 1) {
      total += f(VecD{r.offsets[fi] / l[0]});
      continue;
    }
    // projected region: substitute x_k in all other constraints
    NumRegion q;
    q.dim = n - 1;
    auto project = [&](const VecD& a, double b) -> std::pair<VecD, double> {
      VecD ap(n - 1);
      int jj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        ap[jj] = a[j] - a[k] * l[j] / l[k];
        ++jj;
      }
      return {ap, b - a[k] * r.offsets[fi] / l[k]};
    };
    for (size_t j = 0; j < r.normals.size(); ++j) {
      if (j == fi) continue;
      auto [ap, bp] = project(r.normals[j], r.offsets[j]);
      bool zero = true;
      for (double v : ap)
        if (std::abs(v) > 1e-12) zero = false;
      if (!zero) {
        q.normals.push_back(ap);
        q.offsets.push_back(bp);
      }
    }
    std::vector<std::pair<VecD, double>> proj_kinks;
    for (const auto& [ka, kc] : kinks) {
      auto [ap, cp] = project(ka, kc);
      bool zero = true;
      for (double v : ap)
        if (std::abs(v) > 1e-12) zero = false;
      if (!zero) proj_kinks.emplace_back(ap, cp);
    }
    auto lifted = [&](const VecD& y) {
      VecD x(n);
      double xk = r.offsets[fi] / l[k];
      int jj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        xk -= l[j] / l[k] * y[jj];
        x[j] = y[jj];
        ++jj;
      }
      x[k] = xk;
      return f(x);
    };
    total += integrate_region(q, lifted, proj_kinks, tol) / std::abs(l[k]);
  }
  return total;
}

/// Numeric L(f) for f = max{0, <a,x>+c}: boundary minus weighted interior,
/// with the crease hyperplane passed down as a kink line.
inline double oracle_L_simple(const tkstab::Polytope& p, const tkstab::ExtremalData& ext,
                              const tkstab::RatVec& a, const tkstab::Rat& c, double tol) {
  const int n = p.dim();
  VecD ad = tkstab::to_doubles(a);
  double cd = tkstab::to_double(c);
  auto fmax = [&](const VecD& x) {
    double v = cd;
    for (int i = 0; i < n; ++i) v += ad[i] * x[i];
    return std::max(0.0, v);
  };
  auto sfmax = [&](const VecD& x) { return ext.s.eval(x) * fmax(x); };
  std::vector<std::pair<VecD, double>> kinks{{ad, -cd}};
  double bnd = integrate_boundary_region(p, fmax, kinks, tol);
  double interior = integrate_region(region_of(p), sfmax, kinks, tol);
  return bnd - interior;
}

}  // namespace oracles
