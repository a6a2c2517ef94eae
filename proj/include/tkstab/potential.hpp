#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tkstab/plfunc.hpp"
#include "tkstab/quadrature.hpp"

namespace tkstab {

using MatD = std::vector<VecD>;

/// Convention for the reference potential. Under Paper the canonical
/// potential is sum_i delta_i log delta_i; the interval/square potentials
/// then solve the residual equation exactly and the crease jump formula
/// reproduces L. GuilleminHalf scales by 1/2 for comparison.
enum class PotentialConvention { Paper, GuilleminHalf };

namespace pot_detail {

inline double xlogx(double t) { return t > 0 ? t * std::log(t) : 0.0; }

inline std::string point_str(const VecD& x) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

/// In-place inversion of a small symmetric positive matrix; nullopt when a
/// pivot is nonpositive or vanishing (not strictly convex there).
inline std::optional<MatD> invert_spd(MatD a) {
  const int n = static_cast<int>(a.size());
  MatD inv(n, VecD(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    double d = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      double f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

inline double det_small(MatD a) {
  const int n = static_cast<int>(a.size());
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[c], a[piv]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace pot_detail

/// Type-erased symplectic potential evaluator. `value` must extend
/// continuously to the boundary; `hessian` (when present) is analytic and
/// only valid in the interior.
struct Potential {
  int dim = 0;
  std::function<double(const VecD&)> value;
  std::function<MatD(const VecD&)> hessian;    // empty => finite differences
  std::function<double(const VecD&)> min_delta;  // min_i (lambda_i - <l_i, x>)
};

/// Guillemin-type reference potential u(x) = chi * sum_i delta_i log delta_i
/// with delta_i(x) = lambda_i - <l_i, x>; analytic gradient and Hessian
/// D^2 u = chi * sum_i l_i l_i^T / delta_i.
class CanonicalPotential {
 public:
  CanonicalPotential(const Polytope& p, PotentialConvention conv = PotentialConvention::Paper)
      : dim_(p.dim()), chi_(conv == PotentialConvention::Paper ? 1.0 : 0.5) {
    for (const auto& f : p.facets()) {
      VecD l(dim_);
      for (int i = 0; i < dim_; ++i) l[i] = to_double(Rat(f.normal[i]));
      normals_.push_back(std::move(l));
      offsets_.push_back(to_double(f.offset));
    }
  }

  int dim() const { return dim_; }

  double delta(size_t i, const VecD& x) const {
    double d = offsets_[i];
    for (int j = 0; j < dim_; ++j) d -= normals_[i][j] * x[j];
    return d;
  }

  double min_delta(const VecD& x) const {
    double m = delta(0, x);
    for (size_t i = 1; i < normals_.size(); ++i) m = std::min(m, delta(i, x));
    return m;
  }

  /// Continuous extension to the closure (delta log delta -> 0).
  double value(const VecD& x) const {
    double u = 0;
    for (size_t i = 0; i < normals_.size(); ++i) {
      double d = delta(i, x);
      if (d < -1e-12) throw std::domain_error("potential evaluated outside P at " +
                                              pot_detail::point_str(x));
      u += pot_detail::xlogx(d);
    }
    return chi_ * u;
  }

  VecD gradient(const VecD& x) const {
    VecD g(dim_, 0.0);
    for (size_t i = 0; i < normals_.size(); ++i) {
      double d = delta(i, x);
      if (d <= 0) throw std::domain_error("gradient needs an interior point at " +
                                          pot_detail::point_str(x));
      double f = -(std::log(d) + 1.0);
      for (int j = 0; j < dim_; ++j) g[j] += f * normals_[i][j];
    }
    for (auto& v : g) v *= chi_;
    return g;
  }

  MatD hessian(const VecD& x) const {
    MatD h(dim_, VecD(dim_, 0.0));
    for (size_t i = 0; i < normals_.size(); ++i) {
      double d = delta(i, x);
      if (d <= 0) throw std::domain_error("Hessian needs an interior point at " +
                                          pot_detail::point_str(x));
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) h[a][b] += normals_[i][a] * normals_[i][b] / d;
    }
    for (auto& row : h)
      for (auto& v : row) v *= chi_;
    return h;
  }

  Potential as_potential() const {
    auto self = *this;
    Potential u;
    u.dim = dim_;
    u.value = [self](const VecD& x) { return self.value(x); };
    u.hessian = [self](const VecD& x) { return self.hessian(x); };
    u.min_delta = [self](const VecD& x) { return self.min_delta(x); };
    return u;
  }

 private:
  int dim_;
  double chi_;
  std::vector<VecD> normals_;
  VecD offsets_;
};

inline Potential canonical_potential(const Polytope& p,
                                     PotentialConvention conv = PotentialConvention::Paper) {
  return CanonicalPotential(p, conv).as_potential();
}

/// u + q for a polynomial correction q (smooth up to the boundary); the
/// Hessian of q is attached analytically.
inline Potential with_polynomial(const Potential& base, const Polynomial& q) {
  const int n = base.dim;
  auto value = base.value;
  auto hess = base.hessian;
  std::vector<std::vector<Polynomial>> d2;
  for (int i = 0; i < n; ++i) {
    std::vector<Polynomial> row;
    for (int j = 0; j < n; ++j) row.push_back(q.derivative(i).derivative(j));
    d2.push_back(std::move(row));
  }
  Potential u;
  u.dim = n;
  u.min_delta = base.min_delta;
  u.value = [value, q](const VecD& x) { return value(x) + q.eval(x); };
  if (hess) {
    u.hessian = [hess, d2, n](const VecD& x) {
      MatD h = hess(x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[i][j] += d2[i][j].eval(x);
      return h;
    };
  }
  return u;
}

// ---------------------------------------------------------------------------
// Abreu residual
// ---------------------------------------------------------------------------

/// Rectangular lattice of potential values over the bounding box of P.
/// Values are stored at nodes with min_delta >= margin.
struct PotentialGrid {
  int dim = 0;
  VecD origin;
  double h = 0;
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<char> mask;
  double margin = 0;

  long long flat(const std::vector<int>& idx) const {
    long long f = 0;
    for (int i = 0; i < dim; ++i) f = f * shape[i] + idx[i];
    return f;
  }
  VecD node(const std::vector<int>& idx) const {
    VecD x(dim);
    for (int i = 0; i < dim; ++i) x[i] = origin[i] + idx[i] * h;
    return x;
  }

  static PotentialGrid sample(const Polytope& p, const Potential& u, double grid_h,
                              double grid_margin) {
    if (grid_h <= 0 || grid_margin <= 0) throw std::invalid_argument("h and margin must be > 0");
    PotentialGrid g;
    g.dim = p.dim();
    g.h = grid_h;
    g.margin = grid_margin;
    auto [lo, hi] = p.bounding_box();
    g.origin.resize(g.dim);
    g.shape.resize(g.dim);
    long long total = 1;
    for (int i = 0; i < g.dim; ++i) {
      g.origin[i] = to_double(lo[i]);
      g.shape[i] = static_cast<int>(std::floor((to_double(hi[i]) - g.origin[i]) / grid_h + 1e-9)) + 1;
      total *= g.shape[i];
    }
    g.values.assign(total, 0.0);
    g.mask.assign(total, 0);
    std::vector<int> idx(g.dim, 0);
    while (true) {
      VecD x = g.node(idx);
      if (u.min_delta(x) >= grid_margin) {
        long long f = g.flat(idx);
        g.mask[f] = 1;
        g.values[f] = u.value(x);
      }
      int k = g.dim - 1;
      while (k >= 0 && idx[k] == g.shape[k] - 1) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
    return g;
  }
};

struct ResidualField {
  std::vector<VecD> points;
  VecD values;
  double sup_norm = 0;
  long long masked_points = 0;    // grid nodes satisfying the margin
  long long stencil_skipped = 0;  // masked nodes whose stencil left the domain
};

namespace pot_detail {

/// Shared residual core over a lattice: `inv_hess_at` returns (D^2 u)^{-1}
/// at a node or nullopt when unavailable there; residual_at requires the
/// full +-2h stencil of U values around a margin-interior node.
struct ResidualDriver {
  int dim;
  VecD origin;
  double h;
  std::vector<int> shape;
  std::function<std::optional<MatD>(const std::vector<int>&)> inv_hess_at;
  std::function<bool(const std::vector<int>&)> in_margin;
  const AffineFunc* s;

  ResidualField run() {
    ResidualField out;
    std::map<long long, std::optional<MatD>> ucache;
    auto flat = [&](const std::vector<int>& idx) {
      long long f = 0;
      for (int i = 0; i < dim; ++i) f = f * shape[i] + idx[i];
      return f;
    };
    auto in_range = [&](const std::vector<int>& idx) {
      for (int i = 0; i < dim; ++i)
        if (idx[i] < 0 || idx[i] >= shape[i]) return false;
      return true;
    };
    auto u_at = [&](const std::vector<int>& idx) -> const std::optional<MatD>& {
      static const std::optional<MatD> none = std::nullopt;
      if (!in_range(idx)) return none;
      auto f = flat(idx);
      auto it = ucache.find(f);
      if (it == ucache.end()) it = ucache.emplace(f, inv_hess_at(idx)).first;
      return it->second;
    };

    std::vector<int> idx(dim, 0);
    while (true) {
      if (in_margin(idx)) {
        ++out.masked_points;
        bool ok = true;
        const auto& u0 = u_at(idx);
        if (!u0) {
          VecD x(dim);
          for (int i = 0; i < dim; ++i) x[i] = origin[i] + idx[i] * h;
          throw std::domain_error("Hessian not invertible at masked point " + point_str(x));
        }
        double sum = 0;
        for (int i = 0; i < dim && ok; ++i) {
          for (int j = i; j < dim && ok; ++j) {
            double d2;
            if (i == j) {
              auto ip = idx, im = idx;
              ++ip[i];
              --im[i];
              const auto& up = u_at(ip);
              const auto& um = u_at(im);
              if (!up || !um) {
                ok = false;
                break;
              }
              d2 = ((*up)[i][i] - 2 * (*u0)[i][i] + (*um)[i][i]) / (h * h);
              sum += d2;
            } else {
              auto pp = idx, pm = idx, mp = idx, mm = idx;
              ++pp[i], ++pp[j];
              ++pm[i], --pm[j];
              --mp[i], ++mp[j];
              --mm[i], --mm[j];
              const auto& a = u_at(pp);
              const auto& b = u_at(pm);
              const auto& c = u_at(mp);
              const auto& d = u_at(mm);
              if (!a || !b || !c || !d) {
                ok = false;
                break;
              }
              d2 = ((*a)[i][j] - (*b)[i][j] - (*c)[i][j] + (*d)[i][j]) / (4 * h * h);
              sum += 2 * d2;  // ij and ji terms
            }
          }
        }
        if (ok) {
          VecD x(dim);
          for (int i = 0; i < dim; ++i) x[i] = origin[i] + idx[i] * h;
          double r = -sum - s->eval(x);
          out.points.push_back(x);
          out.values.push_back(r);
          out.sup_norm = std::max(out.sup_norm, std::abs(r));
        } else {
          ++out.stencil_skipped;
        }
      }
      int k = dim - 1;
      while (k >= 0 && idx[k] == shape[k] - 1) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
    if (out.masked_points == 0)
      throw std::domain_error("margin too large: no grid points satisfy it");
    return out;
  }
};

}  // namespace pot_detail

inline ResidualField abreu_residual(const Polytope& p, const ExtremalData& ext,
                                    const PotentialGrid& grid, double margin);

/// Abreu-operator residual r(x) = -sum_ij d^2 U^{ij}/dx_i dx_j - s(x) on the
/// margin-interior lattice, with U = (D^2 u)^{-1} from the analytic Hessian
/// when the potential provides one and from central differences of values
/// otherwise. Returns the residual field and its sup norm.
inline ResidualField abreu_residual(const Polytope& p, const ExtremalData& ext,
                                    const Potential& u, double h, double margin) {
  if (h <= 0 || margin <= 0) throw std::invalid_argument("h and margin must be > 0");
  if (!u.hessian) {
    // value-only evaluator: sample everywhere strictly inside, then take the
    // finite-difference path against the requested margin
    auto grid = PotentialGrid::sample(p, u, h, 1e-12);
    return abreu_residual(p, ext, grid, margin);
  }
  auto [lo, hi] = p.bounding_box();
  pot_detail::ResidualDriver drv;
  drv.dim = p.dim();
  drv.h = h;
  drv.origin.resize(drv.dim);
  drv.shape.resize(drv.dim);
  for (int i = 0; i < drv.dim; ++i) {
    drv.origin[i] = to_double(lo[i]);
    drv.shape[i] = static_cast<int>(std::floor((to_double(hi[i]) - drv.origin[i]) / h + 1e-9)) + 1;
  }
  drv.s = &ext.s;
  drv.inv_hess_at = [&, u](const std::vector<int>& idx) -> std::optional<MatD> {
    VecD x(drv.dim);
    for (int i = 0; i < drv.dim; ++i) x[i] = drv.origin[i] + idx[i] * h;
    if (u.min_delta(x) <= 1e-12) return std::nullopt;
    return pot_detail::invert_spd(u.hessian(x));
  };
  drv.in_margin = [&, u](const std::vector<int>& idx) {
    VecD x(drv.dim);
    for (int i = 0; i < drv.dim; ++i) x[i] = drv.origin[i] + idx[i] * h;
    return u.min_delta(x) >= margin;
  };
  return drv.run();
}

/// Grid-sampled variant: the Hessian itself is taken by central differences
/// of the stored values, then inverted and differentiated again.
inline ResidualField abreu_residual(const Polytope& p, const ExtremalData& ext,
                                    const PotentialGrid& grid, double margin) {
  auto u_can = canonical_potential(p);  // only for the margin gauge
  pot_detail::ResidualDriver drv;
  drv.dim = grid.dim;
  drv.h = grid.h;
  drv.origin = grid.origin;
  drv.shape = grid.shape;
  drv.s = &ext.s;
  auto value_at = [&grid](std::vector<int> idx) -> std::optional<double> {
    for (int i = 0; i < grid.dim; ++i)
      if (idx[i] < 0 || idx[i] >= grid.shape[i]) return std::nullopt;
    auto f = grid.flat(idx);
    if (!grid.mask[f]) return std::nullopt;
    return grid.values[f];
  };
  drv.inv_hess_at = [&grid, value_at](const std::vector<int>& idx) -> std::optional<MatD> {
    const int n = grid.dim;
    const double h2 = grid.h * grid.h;
    MatD hess(n, VecD(n, 0.0));
    auto v0 = value_at(idx);
    if (!v0) return std::nullopt;
    for (int i = 0; i < n; ++i) {
      auto ip = idx, im = idx;
      ++ip[i];
      --im[i];
      auto a = value_at(ip), b = value_at(im);
      if (!a || !b) return std::nullopt;
      hess[i][i] = (*a - 2 * *v0 + *b) / h2;
      for (int j = i + 1; j < n; ++j) {
        auto pp = idx, pm = idx, mp = idx, mm = idx;
        ++pp[i], ++pp[j];
        ++pm[i], --pm[j];
        --mp[i], ++mp[j];
        --mm[i], --mm[j];
        auto c1 = value_at(pp), c2 = value_at(pm), c3 = value_at(mp), c4 = value_at(mm);
        if (!c1 || !c2 || !c3 || !c4) return std::nullopt;
        hess[i][j] = hess[j][i] = (*c1 - *c2 - *c3 + *c4) / (4 * h2);
      }
    }
    return pot_detail::invert_spd(std::move(hess));
  };
  drv.in_margin = [&, u_can](const std::vector<int>& idx) {
    VecD x(drv.dim);
    for (int i = 0; i < drv.dim; ++i) x[i] = drv.origin[i] + idx[i] * drv.h;
    return u_can.min_delta(x) >= margin;
  };
  return drv.run();
}

// ---------------------------------------------------------------------------
// Modified K-energy
// ---------------------------------------------------------------------------

struct KEnergyResult {
  double value = 0;          // F(u) = -int log det D^2 u + L(u)
  double log_det_term = 0;   // int_P log det D^2 u dx
  double boundary_term = 0;  // int_dP u dsigma
  double interior_term = 0;  // int_P s u dx
};

/// Numerical evaluation of the modified K-energy
///   F(u) = -int_P log det(D^2 u) dx + int_dP u dsigma - int_P s u dx.
/// The interior integrals refine geometrically toward the boundary (the log
/// singularity is integrable); non-convexity (det <= 0) is rejected with the
/// offending location.
inline KEnergyResult kenergy(const Polytope& p, const ExtremalData& ext, const Potential& u,
                             const QuadConfig& cfg = {}) {
  if (!u.hessian) throw std::invalid_argument("kenergy requires an analytic Hessian");
  KEnergyResult res;
  auto log_det = [&](const VecD& x) {
    double det = pot_detail::det_small(u.hessian(x));
    if (det <= 0)
      throw std::domain_error("potential not strictly convex at " + pot_detail::point_str(x));
    return std::log(det);
  };
  res.log_det_term = integrate_polytope_numeric(p, log_det, cfg);
  auto su = [&](const VecD& x) { return ext.s.eval(x) * u.value(x); };
  res.interior_term = integrate_polytope_numeric(p, su, cfg);
  res.boundary_term = integrate_boundary_numeric(p, u.value, cfg);
  res.value = -res.log_det_term + res.boundary_term - res.interior_term;
  return res;
}

// ---------------------------------------------------------------------------
// Crease jump integral
// ---------------------------------------------------------------------------

/// The boundary-free representation of L(f) for strictly convex u:
///   L(f) = sum_{lam<mu} int_{crease} U^{ij} J_i J_j / |J| dsigma_0,
/// where J is the gradient jump across the crease. Parametrizing the crease
/// by dropping its steepest coordinate k turns the measure factor into
/// 1/|J_k|, so the integrand stays rational in J. Near the boundary U
/// degenerates linearly, so the integrand extends by 0.
inline double crease_jump_integral(const Polytope& p, const Potential& u, const PLFunc& f,
                                   const QuadConfig& cfg = {}) {
  if (!u.hessian) throw std::invalid_argument("crease jump integral requires an analytic Hessian");
  Subdivision sub = subdivide(p, f);
  double total = 0;
  for (const auto& crease : sub.creases) {
    VecD jump = to_doubles(crease.jump);
    if (p.dim() == 1) {
      VecD x = to_doubles(crease.point);
      auto uinv = pot_detail::invert_spd(u.hessian(x));
      if (!uinv) continue;  // crease sits where u degenerates
      double norm = std::abs(jump[0]);
      total += (*uinv)[0][0] * jump[0] * jump[0] / norm;
      continue;
    }
    const auto& chart = *crease.chart;
    const int n = p.dim();
    VecD sub_coeffs = to_doubles(chart.sub_coeffs);
    double sub_const = to_double(chart.sub_const);
    double denom = std::abs(jump[chart.drop]);
    auto integrand = [&](const VecD& y) {
      VecD x(n);
      double xd = sub_const;
      for (int j = 0; j < n - 1; ++j) xd += sub_coeffs[j] * y[j];
      int jj = 0;
      for (int i = 0; i < n; ++i) x[i] = (i == chart.drop) ? xd : y[jj++];
      if (u.min_delta(x) < 1e-12) return 0.0;  // U vanishes toward dP
      auto uinv = pot_detail::invert_spd(u.hessian(x));
      if (!uinv) return 0.0;
      double q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q += (*uinv)[i][j] * jump[i] * jump[j];
      return q / denom;
    };
    total += integrate_polytope_numeric(*chart.region, integrand, cfg);
  }
  return total;
}

}  // namespace tkstab
