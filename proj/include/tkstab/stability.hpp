#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tkstab/plfunc.hpp"
#include "tkstab/unipoly.hpp"

namespace tkstab {

struct SearchConfig {
  int height = 3;                   // bound on direction components
  Rat tol = Rat(1, 1 << 20);        // rational bisection tolerance
  int threads = 1;                  // affects wall time only, never the report
};

enum class Verdict { Unstable, EqualityNonAffine, NoDestabilizerAtResolution };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Unstable:
      return "UNSTABLE";
    case Verdict::EqualityNonAffine:
      return "EQUALITY_NONAFFINE";
    default:
      return "NO_DESTABILIZER_AT_RESOLUTION";
  }
}

struct Candidate {
  SimplePL v;
  Rat l;         // exact L(v)
  Rat boundary;  // exact int_{dP} v dsigma (> 0)
  Rat ratio;     // l / boundary
};

struct DirectionResult {
  ZVec a;
  bool degenerate = false;
  long long evaluated = 0;
  long long segments_skipped = 0;
  std::optional<Candidate> min_l;
  std::optional<Candidate> min_ratio;
  std::optional<Candidate> equality;  // first candidate with L == 0 exactly
};

struct StabilityReport {
  Verdict verdict = Verdict::NoDestabilizerAtResolution;
  std::optional<Candidate> witness;
  std::optional<Rat> lambda_hat;
  long long candidates_evaluated = 0;
  long long segments_skipped = 0;
  int height = 0;
  std::vector<DirectionResult> per_direction;
};

/// All primitive integer vectors with components in [-H, H], one per +- pair
/// (first nonzero component positive), in ascending lexicographic order.
inline std::vector<ZVec> enumerate_directions(int n, int height) {
  if (height < 1) throw std::invalid_argument("height must be >= 1");
  std::vector<ZVec> out;
  std::vector<int> v(n, -height);
  while (true) {
    int first_nz = -1;
    for (int i = 0; i < n; ++i)
      if (v[i] != 0) {
        first_nz = i;
        break;
      }
    if (first_nz >= 0 && v[first_nz] > 0) {
      ZInt g = 0;
      for (int x : v) g = boost::multiprecision::gcd(g, ZInt(x));
      if (g == 1) {
        ZVec z(n);
        for (int i = 0; i < n; ++i) z[i] = v[i];
        out.push_back(std::move(z));
      }
    }
    int k = n - 1;
    while (k >= 0 && v[k] == height) --k;
    if (k < 0) break;
    ++v[k];
    for (int j = k + 1; j < n; ++j) v[j] = -height;
  }
  return out;
}

/// Sorted distinct values {-<a, v> : v vertex of P}. The crease of
/// max{0, <a,x>+c} meets the interior exactly for c strictly between the
/// first and last breakpoint.
inline RatVec offset_breakpoints(const Polytope& p, const RatVec& a) {
  if (is_zero_vec(a)) throw std::invalid_argument("direction must be nonzero");
  RatVec bps;
  for (const auto& v : p.vertices()) bps.push_back(-dot(a, v));
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

/// Exact L(v) / int_{dP} v dsigma for a simple PL whose crease crosses the
/// interior of P (precondition; otherwise rejected).
inline Rat properness_ratio(const Polytope& p, const ExtremalData& ext, const SimplePL& v) {
  if (!crease_meets_interior(p, v))
    throw std::domain_error("crease does not meet the interior of P");
  auto bd = L_and_boundary_of_pl(p, ext, v.to_pl());
  if (bd.boundary <= 0)
    throw std::domain_error("boundary integral of candidate is not positive");
  return bd.l / bd.boundary;
}

namespace detail {

/// Isolating intervals (half-open (lo, hi]) for the distinct roots of q in
/// (lo, hi], via Sturm-count bisection. Depth-limited; an unresolved cluster
/// is returned as a single interval.
inline void isolate_roots(const std::vector<UniPoly>& chain, const Rat& lo, const Rat& hi,
                          int depth, std::vector<std::pair<Rat, Rat>>& out) {
  int count = sturm_count(chain, lo, hi);
  if (count == 0) return;
  if (count == 1 || depth > 128) {
    out.emplace_back(lo, hi);
    return;
  }
  Rat mid = (lo + hi) / 2;
  isolate_roots(chain, lo, mid, depth + 1, out);
  isolate_roots(chain, mid, hi, depth + 1, out);
}

/// Shrinks an isolating interval of q until its width is below tol, then
/// hunts for an exact rational root with Stern-Brocot probes. Returns the
/// root if it is rational and found, otherwise the final (tiny) interval
/// is reported through lo/hi.
inline std::optional<Rat> refine_root(const std::vector<UniPoly>& chain, const UniPoly& q,
                                      Rat& lo, Rat& hi, const Rat& tol) {
  if (q.eval(hi) == 0) return hi;
  while (hi - lo > tol) {
    Rat mid = (lo + hi) / 2;
    if (q.eval(mid) == 0) return mid;
    if (sturm_count(chain, lo, mid) == 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The simplest rational in a small interval around a rational root is
  // eventually the root itself; irrational roots exit by the floor.
  Rat floor_width = tol * tol;
  for (int iter = 0; iter < 200 && hi - lo > floor_width; ++iter) {
    Rat r = simplest_rational_between(lo, hi);
    if (q.eval(r) == 0) return r;
    if (r == lo || r == hi) r = (lo + hi) / 2;  // probe hit an endpoint; bisect instead
    if (q.eval(r) == 0) return r;
    if (sturm_count(chain, lo, r) == 1) {
      hi = r;
    } else {
      lo = r;
    }
  }
  return std::nullopt;
}

struct DirectionScan {
  const Polytope& p;
  const ExtremalData& ext;
  const SearchConfig& cfg;
  DirectionResult res;
  RatVec a;
  Rat lo_glob, hi_glob;
  std::map<Rat, std::pair<Rat, Rat>> cache;  // c -> (L, boundary)

  std::pair<Rat, Rat> eval(const Rat& c) {
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    SimplePL v{a, c};
    auto bd = L_and_boundary_of_pl(p, ext, v.to_pl());
    ++res.evaluated;
    auto val = std::make_pair(bd.l, bd.boundary);
    cache.emplace(c, val);
    return val;
  }

  void consider(const Rat& c) {
    if (!(lo_glob < c && c < hi_glob)) return;  // crease must cross the interior
    auto [l, b] = eval(c);
    if (b <= 0) throw std::logic_error("nonpositive boundary integral for interior crease");
    Candidate cand{SimplePL{a, c}, l, b, l / b};
    if (!res.min_l || cand.l < res.min_l->l) res.min_l = cand;
    if (!res.min_ratio || cand.ratio < res.min_ratio->ratio) res.min_ratio = cand;
    if (l == 0 && !res.equality) res.equality = cand;
  }

  /// Examines roots of `poly` (a derivative or ratio numerator) inside the
  /// segment and evaluates candidates at refined, snapped locations.
  void probe_minimizers(const UniPoly& poly, const Rat& c0, const Rat& c1) {
    if (poly.is_zero() || poly.degree() < 1) return;
    auto chain = sturm_chain(poly);
    std::vector<std::pair<Rat, Rat>> intervals;
    isolate_roots(chain, c0, c1, 0, intervals);
    for (auto& [lo, hi] : intervals) {
      auto root = refine_root(chain, poly, lo, hi, cfg.tol);
      Rat snap = root ? *root : simplest_rational_between(lo, hi);
      if (c0 < snap && snap < c1) consider(snap);
    }
  }

  void run_segment(const Rat& c0, const Rat& c1) {
    const int n = p.dim();
    // On a breakpoint-free segment the subdivision combinatorics are fixed
    // and L(c) is a polynomial of degree <= n+2: twice differentiating in c
    // leaves the integral of the affine s over the moving crease section,
    // whose measure is a degree-(n-1) polynomial in c and whose integrand
    // contributes one more degree. (With constant s the degree drops to n+1.)
    const int nn = n + 3;
    std::vector<std::pair<Rat, Rat>> lpts, bpts;
    for (int j = 0; j < nn; ++j) {
      Rat c = c0 + (c1 - c0) * Rat(j) / Rat(nn - 1);
      auto [l, b] = eval(c);
      lpts.emplace_back(c, l);
      bpts.emplace_back(c, b);
    }
    UniPoly q = UniPoly::interpolate(lpts);
    UniPoly bq = UniPoly::interpolate(bpts);

    // Verify the reconstruction at an off-node point; a mismatch means the
    // degree assumption broke and the sweep must not silently continue.
    Rat cv = c0 + (c1 - c0) / Rat(2 * (nn - 1));
    auto [lv, bv] = eval(cv);
    if (q.eval(cv) != lv || bq.eval(cv) != bv)
      throw std::logic_error("segment polynomial reconstruction failed verification");

    for (const auto& [c, l] : lpts) consider(c);
    consider(cv);

    if (q.is_zero()) {
      consider((c0 + c1) / 2);  // L vanishes identically on the segment
      return;
    }

    // Exact sign analysis: between consecutive roots the sign of q is
    // constant, so sampling each gap decides negativity completely.
    auto chain = sturm_chain(q);
    std::vector<std::pair<Rat, Rat>> intervals;
    isolate_roots(chain, c0, c1, 0, intervals);
    std::vector<Rat> cuts{c0};
    for (auto& [lo, hi] : intervals) {
      Rat l2 = lo, h2 = hi;
      auto root = refine_root(chain, q, l2, h2, cfg.tol);
      if (root) {
        consider(*root);  // exact zero of L (equality witness if interior)
        cuts.push_back(*root);
      } else {
        cuts.push_back(l2);
        cuts.push_back(h2);
        consider(simplest_rational_between(l2, h2));  // near-root sample for lambda_hat
      }
    }
    cuts.push_back(c1);
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i] == cuts[i + 1]) continue;
      Rat m = (cuts[i] + cuts[i + 1]) / 2;
      if (q.eval(m) < 0) consider(m);  // sign is constant on the gap
    }

    // Candidate refinement: critical points of L and of the ratio L/B.
    probe_minimizers(q.derivative(), c0, c1);
    probe_minimizers(q.derivative() * bq - q * bq.derivative(), c0, c1);
  }

  void run() {
    auto bps = offset_breakpoints(p, a);
    if (bps.size() < 2) {
      res.degenerate = true;
      ++res.segments_skipped;
      return;
    }
    lo_glob = bps.front();
    hi_glob = bps.back();
    for (size_t i = 0; i + 1 < bps.size(); ++i) run_segment(bps[i], bps[i + 1]);
  }
};

}  // namespace detail

/// Sweeps all primitive directions up to the configured height; on each
/// breakpoint segment L(c) is reconstructed exactly as a polynomial and its
/// sign analyzed completely, so NO_DESTABILIZER_AT_RESOLUTION is a statement
/// about all offsets for the enumerated directions. Deterministic for any
/// thread count (ordered merge).
inline StabilityReport search_destabilizer(const Polytope& p, const ExtremalData& ext,
                                           const SearchConfig& cfg) {
  auto dirs = enumerate_directions(p.dim(), cfg.height);
  std::vector<DirectionResult> results(dirs.size());

  auto worker = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      detail::DirectionScan scan{p, ext, cfg};
      scan.a = to_ratvec(dirs[i]);
      scan.res.a = dirs[i];
      scan.run();
      results[i] = std::move(scan.res);
    }
  };

  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1 || dirs.size() < 2) {
    worker(0, dirs.size());
  } else {
    nthreads = std::min<int>(nthreads, static_cast<int>(dirs.size()));
    std::vector<std::thread> pool;
    size_t chunk = (dirs.size() + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      size_t b = t * chunk, e = std::min(dirs.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  StabilityReport rep;
  rep.height = cfg.height;
  std::optional<Candidate> min_l, min_ratio, equality;
  for (auto& r : results) {
    rep.candidates_evaluated += r.evaluated;
    rep.segments_skipped += r.segments_skipped;
    if (r.min_l && (!min_l || r.min_l->l < min_l->l)) min_l = r.min_l;
    if (r.min_ratio && (!min_ratio || r.min_ratio->ratio < min_ratio->ratio))
      min_ratio = r.min_ratio;
    if (r.equality && !equality) equality = r.equality;
  }
  rep.per_direction = std::move(results);
  if (min_ratio) rep.lambda_hat = min_ratio->ratio;
  if (min_l && min_l->l < 0) {
    rep.verdict = Verdict::Unstable;
    rep.witness = min_l;
  } else if (equality) {
    rep.verdict = Verdict::EqualityNonAffine;
    rep.witness = equality;
  } else {
    rep.verdict = Verdict::NoDestabilizerAtResolution;
  }
  return rep;
}

}  // namespace tkstab
