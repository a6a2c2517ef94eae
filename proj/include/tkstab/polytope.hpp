#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tkstab/linalg.hpp"
#include "tkstab/rational.hpp"

namespace tkstab {

/// Closed half-space {x : <normal, x> <= offset} with a primitive integer
/// normal (gcd of components = 1).
struct Halfspace {
  ZVec normal;
  Rat offset;

  friend bool operator==(const Halfspace& a, const Halfspace& b) {
    return a.normal == b.normal && a.offset == b.offset;
  }
};

class PolytopeError : public std::runtime_error {
 public:
  enum class Code {
    BadInput,
    Unbounded,
    Empty,
    LowerDimensional,
    DuplicateFacet,
    RedundantFacet,
  };

  PolytopeError(Code code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

namespace detail {

/// Scales a rational half-space to its canonical primitive-integer form.
/// Returns nullopt for a zero normal (the caller decides what that means).
inline std::optional<Halfspace> canonicalize_halfspace(const RatVec& normal,
                                                       const Rat& offset) {
  const size_t n = normal.size();
  ZInt lcm_den = 1;
  bool all_zero = true;
  for (const auto& a : normal) {
    if (a != 0) all_zero = false;
    lcm_den = boost::multiprecision::lcm(lcm_den, ZInt(denominator(a)));
  }
  if (all_zero) return std::nullopt;
  ZVec num(n);
  ZInt g = 0;
  for (size_t i = 0; i < n; ++i) {
    Rat scaled = normal[i] * Rat(lcm_den);
    num[i] = ZInt(numerator(scaled));
    g = boost::multiprecision::gcd(g, num[i]);
  }
  for (auto& v : num) v /= g;
  return Halfspace{std::move(num), offset * Rat(lcm_den) / Rat(g)};
}

}  // namespace detail

/// Bounded, full-dimensional rational polytope in half-space representation.
///
/// The strict builder (`build`) enforces the representation contract exactly:
/// irredundant primitive constraints, bounded nonempty full-dimensional set.
/// The pruning factory (`intersect_pruned`) silently drops trivial, duplicate
/// and non-facet-defining half-spaces and signals degenerate results instead
/// of throwing; it is what derived regions (subdivision cells, facet charts,
/// hyperplane slices) are built with.
class Polytope {
 public:
  enum class Status { Valid, Empty, LowerDim, Unbounded };

  /// Strict construction per the external contract. Throws PolytopeError.
  static Polytope build(int dim, std::vector<ZVec> normals, RatVec offsets) {
    if (dim < 1) throw PolytopeError(PolytopeError::Code::BadInput, "dimension must be >= 1");
    if (normals.size() != offsets.size())
      throw PolytopeError(PolytopeError::Code::BadInput, "normals/offsets count mismatch");
    std::vector<std::pair<RatVec, Rat>> hs;
    hs.reserve(normals.size());
    for (size_t i = 0; i < normals.size(); ++i) {
      if (static_cast<int>(normals[i].size()) != dim)
        throw PolytopeError(PolytopeError::Code::BadInput, "normal has wrong arity");
      hs.emplace_back(to_ratvec(normals[i]), offsets[i]);
    }
    Polytope p(dim);
    auto status = p.construct(hs, /*strict=*/true);
    if (status != Status::Valid) throw_status(status);
    return p;
  }

  /// Pruning construction from rational half-spaces; nullopt when the
  /// intersection is empty or not full-dimensional.
  static std::optional<Polytope> intersect_pruned(
      int dim, const std::vector<std::pair<RatVec, Rat>>& halfspaces) {
    Polytope p(dim);
    auto status = p.construct(halfspaces, /*strict=*/false);
    if (status == Status::Unbounded)
      throw PolytopeError(PolytopeError::Code::Unbounded,
                          "pruned intersection is unbounded");
    if (status != Status::Valid) return std::nullopt;
    return p;
  }

  int dim() const { return dim_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<RatVec>& vertices() const { return vertices_; }

  /// Vertex indices lying on facet i (sorted ascending).
  const std::vector<std::vector<int>>& facet_vertices() const { return facet_vertices_; }

  bool contains(const RatVec& x) const {
    for (const auto& f : facets_)
      if (dot(f.normal, x) > f.offset) return false;
    return true;
  }

  bool strictly_contains(const RatVec& x) const {
    for (const auto& f : facets_)
      if (dot(f.normal, x) >= f.offset) return false;
    return true;
  }

  /// Facet constraints as rational pairs, for re-intersection.
  std::vector<std::pair<RatVec, Rat>> halfspaces() const {
    std::vector<std::pair<RatVec, Rat>> hs;
    hs.reserve(facets_.size());
    for (const auto& f : facets_) hs.emplace_back(to_ratvec(f.normal), f.offset);
    return hs;
  }

  std::pair<RatVec, RatVec> bounding_box() const {
    RatVec lo = vertices_[0], hi = vertices_[0];
    for (const auto& v : vertices_) {
      for (int i = 0; i < dim_; ++i) {
        if (v[i] < lo[i]) lo[i] = v[i];
        if (v[i] > hi[i]) hi[i] = v[i];
      }
    }
    return {lo, hi};
  }

  /// Image polytope U.P + t for an integer matrix U with det = +-1.
  Polytope transformed(const std::vector<ZVec>& u, const RatVec& t) const {
    RatMat ur(dim_, RatVec(dim_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) ur[i][j] = Rat(u[i][j]);
    auto uinv = inverse(ur);
    if (!uinv) throw PolytopeError(PolytopeError::Code::BadInput, "singular transform");
    std::vector<ZVec> normals;
    RatVec offsets;
    for (const auto& f : facets_) {
      // l' = U^{-T} l, lambda' = lambda + <l', t>
      RatVec lp(dim_, Rat(0));
      for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) lp[j] += (*uinv)[i][j] * Rat(f.normal[i]);
      auto h = detail::canonicalize_halfspace(lp, f.offset + dot(lp, t));
      normals.push_back(h->normal);
      offsets.push_back(h->offset);
    }
    return build(dim_, std::move(normals), std::move(offsets));
  }

  /// Dilation rho.P for rational rho > 0.
  Polytope scaled(const Rat& rho) const {
    std::vector<ZVec> normals;
    RatVec offsets;
    for (const auto& f : facets_) {
      normals.push_back(f.normal);
      offsets.push_back(f.offset * rho);
    }
    return build(dim_, std::move(normals), std::move(offsets));
  }

 private:
  explicit Polytope(int dim) : dim_(dim) {}

  [[noreturn]] static void throw_status(Status s) {
    switch (s) {
      case Status::Empty:
        throw PolytopeError(PolytopeError::Code::Empty, "feasible region is empty");
      case Status::LowerDim:
        throw PolytopeError(PolytopeError::Code::LowerDimensional,
                            "feasible region is not full-dimensional");
      default:
        throw PolytopeError(PolytopeError::Code::Unbounded, "feasible region is unbounded");
    }
  }

  Status construct(const std::vector<std::pair<RatVec, Rat>>& raw, bool strict) {
    const int n = dim_;
    std::vector<Halfspace> cons;
    for (size_t i = 0; i < raw.size(); ++i) {
      auto h = detail::canonicalize_halfspace(raw[i].first, raw[i].second);
      if (!h) {
        // 0 <= offset is vacuous, 0 <= negative is infeasible.
        if (raw[i].second >= 0) {
          if (strict)
            throw PolytopeError(PolytopeError::Code::BadInput,
                                "zero normal in half-space " + std::to_string(i));
          continue;
        }
        if (strict)
          throw PolytopeError(PolytopeError::Code::BadInput,
                              "infeasible zero-normal half-space " + std::to_string(i));
        return Status::Empty;
      }
      bool dup = false;
      for (auto& c : cons) {
        if (c.normal != h->normal) continue;
        if (c.offset == h->offset) {
          if (strict)
            throw PolytopeError(PolytopeError::Code::DuplicateFacet,
                                "duplicate facet hyperplane at input " + std::to_string(i));
          dup = true;
          break;
        }
        if (!strict) {
          // Parallel same-direction constraints: keep the tighter one.
          if (h->offset < c.offset) c.offset = h->offset;
          dup = true;
          break;
        }
      }
      if (!dup) cons.push_back(std::move(*h));
    }
    if (cons.empty()) {
      if (strict)
        throw PolytopeError(PolytopeError::Code::BadInput, "no constraints given");
      return Status::Unbounded;
    }

    // Boundedness: the normals must span R^n and the recession cone
    // {y : <l_i, y> <= 0} must be {0}. A pointed cone is nonzero iff some
    // (n-1)-subset of constraints-at-equality has a one-dimensional null
    // space whose generator is feasible for the whole homogeneous system.
    {
      RatMat nm;
      for (const auto& c : cons) nm.push_back(to_ratvec(c.normal));
      if (rank(nm) < n) {
        if (strict) throw_status(Status::Unbounded);
        return Status::Unbounded;
      }
      const int d = static_cast<int>(cons.size());
      std::vector<int> idx(n - 1);
      auto ray_feasible = [&](const RatVec& y) {
        bool ok_pos = true, ok_neg = true;
        for (const auto& c : cons) {
          Rat v = dot(c.normal, y);
          if (v > 0) ok_pos = false;
          if (v < 0) ok_neg = false;
          if (!ok_pos && !ok_neg) return false;
        }
        return true;
      };
      if (n == 1) {
        RatVec y{Rat(1)};
        if (ray_feasible(y)) {
          if (strict) throw_status(Status::Unbounded);
          return Status::Unbounded;
        }
      } else {
        // iterate over all (n-1)-subsets of constraint indices
        for (int i = 0; i < n - 1; ++i) idx[i] = i;
        bool more = d >= n - 1;
        while (more) {
          RatMat sub;
          for (int i : idx) sub.push_back(to_ratvec(cons[i].normal));
          auto ns = nullspace(sub, n);
          if (ns.size() == 1 && ray_feasible(ns[0])) {
            if (strict) throw_status(Status::Unbounded);
            return Status::Unbounded;
          }
          int k = n - 2;
          while (k >= 0 && idx[k] == d - (n - 1) + k) --k;
          if (k < 0) break;
          ++idx[k];
          for (int j = k + 1; j < n - 1; ++j) idx[j] = idx[j - 1] + 1;
        }
      }
    }

    // Vertex enumeration over all n-subsets of active constraints.
    const int d = static_cast<int>(cons.size());
    if (d < n) {
      if (strict) throw_status(Status::Unbounded);
      return Status::Unbounded;
    }
    std::vector<RatVec> verts;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    while (true) {
      RatMat a;
      RatVec b;
      for (int i : idx) {
        a.push_back(to_ratvec(cons[i].normal));
        b.push_back(cons[i].offset);
      }
      if (auto x = solve_linear(std::move(a), std::move(b))) {
        bool feasible = true;
        for (const auto& c : cons) {
          if (dot(c.normal, *x) > c.offset) {
            feasible = false;
            break;
          }
        }
        if (feasible) {
          bool known = false;
          for (const auto& v : verts)
            if (v == *x) {
              known = true;
              break;
            }
          if (!known) verts.push_back(std::move(*x));
        }
      }
      int k = n - 1;
      while (k >= 0 && idx[k] == d - n + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }

    if (verts.empty()) {
      if (strict) throw_status(Status::Empty);
      return Status::Empty;
    }
    if (affine_rank(verts) < n) {
      if (strict) throw_status(Status::LowerDim);
      return Status::LowerDim;
    }
    std::sort(verts.begin(), verts.end(), lex_less);

    // Facet classification: a constraint is kept iff its active vertex set
    // spans an (n-1)-dimensional affine subspace.
    std::vector<Halfspace> kept;
    std::vector<std::vector<int>> kept_verts;
    for (size_t ci = 0; ci < cons.size(); ++ci) {
      std::vector<int> on;
      std::vector<RatVec> pts;
      for (size_t vi = 0; vi < verts.size(); ++vi) {
        if (dot(cons[ci].normal, verts[vi]) == cons[ci].offset) {
          on.push_back(static_cast<int>(vi));
          pts.push_back(verts[vi]);
        }
      }
      if (affine_rank(pts) == n - 1) {
        kept.push_back(cons[ci]);
        kept_verts.push_back(std::move(on));
      } else if (strict) {
        throw PolytopeError(PolytopeError::Code::RedundantFacet,
                            "half-space " + std::to_string(ci) +
                                " does not define a facet (redundant)");
      }
    }

    facets_ = std::move(kept);
    facet_vertices_ = std::move(kept_verts);
    vertices_ = std::move(verts);
    return Status::Valid;
  }

  int dim_;
  std::vector<Halfspace> facets_;
  std::vector<RatVec> vertices_;
  std::vector<std::vector<int>> facet_vertices_;
};

/// Convenience constructor from plain integer data.
inline Polytope make_polytope(int dim, const std::vector<std::vector<long long>>& normals,
                              const RatVec& offsets) {
  std::vector<ZVec> zn;
  for (const auto& row : normals) {
    ZVec z(row.size());
    for (size_t i = 0; i < row.size(); ++i) z[i] = row[i];
    zn.push_back(std::move(z));
  }
  return Polytope::build(dim, std::move(zn), offsets);
}

// ---------------------------------------------------------------------------
// Delzant check
// ---------------------------------------------------------------------------

struct DelzantReport {
  bool is_delzant = true;
  std::vector<int> offending_vertices;  // indices into P.vertices()
};

/// A vertex passes iff exactly n facets meet there and their primitive
/// normals have determinant +-1.
inline DelzantReport check_delzant(const Polytope& p) {
  DelzantReport rep;
  const int n = p.dim();
  for (size_t vi = 0; vi < p.vertices().size(); ++vi) {
    std::vector<int> active;
    for (size_t fi = 0; fi < p.facets().size(); ++fi) {
      const auto& f = p.facets()[fi];
      if (dot(f.normal, p.vertices()[vi]) == f.offset) active.push_back(static_cast<int>(fi));
    }
    bool ok = static_cast<int>(active.size()) == n;
    if (ok) {
      RatMat m;
      for (int fi : active) m.push_back(to_ratvec(p.facets()[fi].normal));
      Rat det = determinant(std::move(m));
      ok = (det == 1 || det == -1);
    }
    if (!ok) {
      rep.is_delzant = false;
      rep.offending_vertices.push_back(static_cast<int>(vi));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hyperplane charts and triangulation
// ---------------------------------------------------------------------------

/// Affine parametrization of the slice {x : <normal, x> = rhs} of a region.
/// Coordinate `drop` is eliminated: x_drop = sub_const + sum sub_coeffs[j] y_j
/// where y runs over the remaining coordinates in order. For dim == 1 the
/// slice is a single point and `region` is empty.
struct HyperplaneChart {
  int drop = 0;
  RatVec sub_coeffs;
  Rat sub_const;
  std::optional<Polytope> region;  // (dim-1)-dimensional; nullopt iff dim == 1
  RatVec point;                    // the slice itself when dim == 1

  RatVec lift(const RatVec& y) const {
    RatVec x;
    const int n = static_cast<int>(sub_coeffs.size()) + 1;
    x.reserve(n);
    Rat xd = sub_const;
    for (size_t j = 0; j < sub_coeffs.size(); ++j) xd += sub_coeffs[j] * y[j];
    int jj = 0;
    for (int i = 0; i < n; ++i) {
      if (i == drop) {
        x.push_back(xd);
      } else {
        x.push_back(y[jj++]);
      }
    }
    return x;
  }
};

/// Restricts a constraint system to a hyperplane. Returns nullopt when the
/// slice is empty or lower-dimensional within the hyperplane.
inline std::optional<HyperplaneChart> restrict_to_hyperplane(
    int dim, const std::vector<std::pair<RatVec, Rat>>& ineqs, const RatVec& h_normal,
    const Rat& h_rhs) {
  int k = 0;
  for (int i = 1; i < dim; ++i)
    if (abs(h_normal[i]) > abs(h_normal[k])) k = i;
  if (h_normal[k] == 0) return std::nullopt;

  HyperplaneChart chart;
  chart.drop = k;
  chart.sub_coeffs.assign(dim - 1, Rat(0));
  chart.sub_const = h_rhs / h_normal[k];
  int jj = 0;
  for (int j = 0; j < dim; ++j) {
    if (j == k) continue;
    chart.sub_coeffs[jj++] = -h_normal[j] / h_normal[k];
  }

  if (dim == 1) {
    chart.point = RatVec{chart.sub_const};
    for (const auto& [a, b] : ineqs)
      if (dot(a, chart.point) > b) return std::nullopt;
    return chart;
  }

  std::vector<std::pair<RatVec, Rat>> sub;
  sub.reserve(ineqs.size());
  for (const auto& [a, b] : ineqs) {
    RatVec ap(dim - 1, Rat(0));
    int j2 = 0;
    for (int j = 0; j < dim; ++j) {
      if (j == k) continue;
      ap[j2] = a[j] + a[k] * chart.sub_coeffs[j2];
      ++j2;
    }
    Rat bp = b - a[k] * chart.sub_const;
    if (is_zero_vec(ap)) {
      if (bp < 0) return std::nullopt;  // slice misses the region entirely
      continue;
    }
    sub.emplace_back(std::move(ap), std::move(bp));
  }
  auto region = Polytope::intersect_pruned(dim - 1, sub);
  if (!region) return std::nullopt;
  chart.region = std::move(*region);
  return chart;
}

/// Chart of facet i of P (valid for dim >= 2; a 1-d facet is a point).
inline HyperplaneChart facet_chart(const Polytope& p, int facet_idx) {
  std::vector<std::pair<RatVec, Rat>> others;
  for (size_t j = 0; j < p.facets().size(); ++j) {
    if (static_cast<int>(j) == facet_idx) continue;
    others.emplace_back(to_ratvec(p.facets()[j].normal), p.facets()[j].offset);
  }
  auto chart = restrict_to_hyperplane(p.dim(), others,
                                      to_ratvec(p.facets()[facet_idx].normal),
                                      p.facets()[facet_idx].offset);
  if (!chart)
    throw std::logic_error("facet chart construction failed on a valid polytope");
  return *chart;
}

struct Simplex {
  std::vector<RatVec> verts;  // dim+1 affinely independent points
};

/// Deterministic triangulation: fan from the lexicographically smallest
/// vertex over recursively triangulated facets not containing it.
inline std::vector<Simplex> triangulate(const Polytope& p) {
  const int n = p.dim();
  if (n == 1) {
    return {Simplex{{p.vertices().front(), p.vertices().back()}}};
  }
  const RatVec& apex = p.vertices()[0];
  std::vector<Simplex> out;
  for (size_t fi = 0; fi < p.facets().size(); ++fi) {
    const auto& f = p.facets()[fi];
    if (dot(f.normal, apex) == f.offset) continue;  // facet contains apex
    auto chart = facet_chart(p, static_cast<int>(fi));
    std::vector<Simplex> sub;
    if (n - 1 == 1) {
      const auto& q = *chart.region;
      sub.push_back(Simplex{{q.vertices().front(), q.vertices().back()}});
    } else {
      sub = triangulate(*chart.region);
    }
    for (const auto& s : sub) {
      Simplex t;
      t.verts.push_back(apex);
      for (const auto& y : s.verts) t.verts.push_back(chart.lift(y));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace tkstab
