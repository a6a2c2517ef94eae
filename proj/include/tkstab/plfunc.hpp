#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "tkstab/extremal.hpp"

namespace tkstab {

/// Convex piecewise-linear function max{f^1, ..., f^r} of affine pieces.
struct PLFunc {
  std::vector<AffineFunc> pieces;
};

/// max{0, <a, x> + c}; the hyperplane <a, x> + c = 0 is its crease.
struct SimplePL {
  RatVec a;
  Rat c;

  PLFunc to_pl() const {
    PLFunc f;
    f.pieces.push_back({RatVec(a.size(), Rat(0)), Rat(0)});
    f.pieces.push_back({a, c});
    return f;
  }
};

inline Rat eval_pl(const PLFunc& f, const RatVec& x) {
  Rat best = f.pieces[0].eval(x);
  for (size_t i = 1; i < f.pieces.size(); ++i) {
    Rat v = f.pieces[i].eval(x);
    if (v > best) best = v;
  }
  return best;
}

namespace detail {

/// Region where piece lam dominates every other piece, intersected with P.
inline std::optional<Polytope> dominance_cell(const Polytope& p, const PLFunc& f, size_t lam) {
  auto hs = p.halfspaces();
  for (size_t mu = 0; mu < f.pieces.size(); ++mu) {
    if (mu == lam) continue;
    // f^lam >= f^mu  <=>  <a_mu - a_lam, x> <= c_lam - c_mu
    RatVec normal(p.dim());
    for (int i = 0; i < p.dim(); ++i)
      normal[i] = f.pieces[mu].grad[i] - f.pieces[lam].grad[i];
    hs.emplace_back(std::move(normal), f.pieces[lam].cst - f.pieces[mu].cst);
  }
  return Polytope::intersect_pruned(p.dim(), hs);
}

}  // namespace detail

/// Canonical representation: duplicate pieces are removed, and pieces whose
/// dominance region is empty or lower-dimensional are dropped (they are never
/// attained on a full-dimensional subset of P). Piece order is preserved.
inline PLFunc pruned(const Polytope& p, const PLFunc& f) {
  if (f.pieces.empty()) throw std::invalid_argument("PL function needs at least one piece");
  PLFunc dedup;
  for (const auto& piece : f.pieces) {
    bool seen = false;
    for (const auto& q : dedup.pieces)
      if (q == piece) {
        seen = true;
        break;
      }
    if (!seen) dedup.pieces.push_back(piece);
  }
  PLFunc out;
  for (size_t lam = 0; lam < dedup.pieces.size(); ++lam) {
    if (detail::dominance_cell(p, dedup, lam)) out.pieces.push_back(dedup.pieces[lam]);
  }
  if (out.pieces.empty()) {
    // Every cell degenerate can only happen with a single repeated piece.
    out.pieces.push_back(dedup.pieces[0]);
  }
  return out;
}

struct SubdivisionCell {
  Polytope poly;
  int piece;  // index into Subdivision::func.pieces
};

/// Common (n-1)-dimensional face of two cells, with its hyperplane data.
/// jump = grad(f^lam) - grad(f^mu) is the gradient jump across the crease;
/// on the crease <jump, x> = rhs. The chart parametrizes the face for
/// quadrature; for n == 1 the face is the single point `point`.
struct Crease {
  int lam = 0, mu = 0;
  RatVec jump;
  Rat rhs;
  std::optional<HyperplaneChart> chart;  // engaged iff n >= 2
  RatVec point;                          // engaged iff n == 1
};

struct Subdivision {
  PLFunc func;  // pruned representation
  std::vector<SubdivisionCell> cells;
  std::vector<Crease> creases;
};

/// Splits P into the dominance cells of the pruned pieces of f and extracts
/// the creases (common facets between cells). Cells are closed; their
/// measure-zero overlaps are harmless for integration.
inline Subdivision subdivide(const Polytope& p, const PLFunc& raw) {
  Subdivision sub;
  sub.func = pruned(p, raw);
  const auto& pieces = sub.func.pieces;
  for (size_t lam = 0; lam < pieces.size(); ++lam) {
    auto cell = detail::dominance_cell(p, sub.func, lam);
    if (!cell) throw std::logic_error("pruned piece lost its cell");
    sub.cells.push_back({std::move(*cell), static_cast<int>(lam)});
  }
  // Creases between cells lam < mu live on {f^lam = f^mu}.
  for (size_t lam = 0; lam + 1 < pieces.size(); ++lam) {
    for (size_t mu = lam + 1; mu < pieces.size(); ++mu) {
      RatVec jump(p.dim());
      for (int i = 0; i < p.dim(); ++i)
        jump[i] = pieces[lam].grad[i] - pieces[mu].grad[i];
      if (is_zero_vec(jump)) continue;
      Rat rhs = pieces[mu].cst - pieces[lam].cst;
      // constraints: P plus dominance of both lam and mu
      auto hs = p.halfspaces();
      for (size_t nu = 0; nu < pieces.size(); ++nu) {
        for (size_t which : {lam, mu}) {
          if (nu == which) continue;
          RatVec normal(p.dim());
          for (int i = 0; i < p.dim(); ++i)
            normal[i] = pieces[nu].grad[i] - pieces[which].grad[i];
          hs.emplace_back(std::move(normal), pieces[which].cst - pieces[nu].cst);
        }
      }
      auto chart = restrict_to_hyperplane(p.dim(), hs, jump, rhs);
      if (!chart) continue;  // cells meet in dimension < n-1 or not at all
      Crease cr;
      cr.lam = static_cast<int>(lam);
      cr.mu = static_cast<int>(mu);
      cr.jump = std::move(jump);
      cr.rhs = rhs;
      if (p.dim() == 1) {
        cr.point = chart->point;
      } else {
        cr.chart = std::move(*chart);
      }
      sub.creases.push_back(std::move(cr));
    }
  }
  return sub;
}

namespace detail {

/// Integral of q over the part of boundary(cell) lying in boundary(P),
/// with P's lattice measure: cell facets are matched against P's facet
/// hyperplanes by their canonical (normal, offset) pair.
inline Rat integrate_cell_outer_boundary(const Polytope& cell, const Polytope& p,
                                         const Polynomial& q) {
  Rat total = 0;
  for (size_t i = 0; i < cell.facets().size(); ++i) {
    const auto& cf = cell.facets()[i];
    bool on_outer = false;
    for (const auto& pf : p.facets())
      if (pf == cf) {
        on_outer = true;
        break;
      }
    if (on_outer) total += integrate_facet(cell, static_cast<int>(i), q);
  }
  return total;
}

}  // namespace detail

struct PLBreakdown {
  Rat l;         // L(f)
  Rat boundary;  // int_{dP} f dsigma
  Rat interior;  // int_P s f dx
};

/// Exact evaluation of L on a PL function via the crease subdivision:
///   L(f) = sum_lam [ int_{dP cap P^lam} f^lam dsigma - int_{P^lam} s f^lam dx ].
inline PLBreakdown L_and_boundary_of_pl(const Polytope& p, const ExtremalData& ext,
                                        const PLFunc& f) {
  Subdivision sub = subdivide(p, f);
  Polynomial s_poly = ext.s.to_poly();
  PLBreakdown out{Rat(0), Rat(0), Rat(0)};
  for (const auto& cell : sub.cells) {
    Polynomial piece = sub.func.pieces[cell.piece].to_poly();
    out.boundary += detail::integrate_cell_outer_boundary(cell.poly, p, piece);
    out.interior += integrate_poly(cell.poly, s_poly * piece);
  }
  out.l = out.boundary - out.interior;
  return out;
}

inline Rat L_of_pl(const Polytope& p, const ExtremalData& ext, const PLFunc& f) {
  return L_and_boundary_of_pl(p, ext, f).l;
}

/// int_{dP} f dsigma for PL f (no extremal data needed).
inline Rat boundary_integral_pl(const Polytope& p, const PLFunc& f) {
  Subdivision sub = subdivide(p, f);
  Rat total = 0;
  for (const auto& cell : sub.cells)
    total += detail::integrate_cell_outer_boundary(cell.poly, p,
                                                   sub.func.pieces[cell.piece].to_poly());
  return total;
}

/// True iff the crease hyperplane of v crosses the interior of P, i.e. the
/// affine form <a, x> + c changes sign strictly over the vertices.
inline bool crease_meets_interior(const Polytope& p, const SimplePL& v) {
  bool has_neg = false, has_pos = false;
  for (const auto& vert : p.vertices()) {
    Rat t = dot(v.a, vert) + v.c;
    if (t < 0) has_neg = true;
    if (t > 0) has_pos = true;
    if (has_neg && has_pos) return true;
  }
  return false;
}

/// Relative Futaki invariant of the toric degeneration induced by rational
/// PL f:  F = -L(f) / (2 Vol(P)).
inline Rat relative_futaki(const Polytope& p, const ExtremalData& ext, const PLFunc& f) {
  return -L_of_pl(p, ext, f) / (2 * ext.vol);
}

}  // namespace tkstab
