#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "tkstab/rational.hpp"

namespace tkstab {

/// Dense univariate polynomial over the rationals (c[i] is the x^i coefficient).
struct UniPoly {
  RatVec c;

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  Rat eval(const Rat& x) const {
    Rat r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }

  UniPoly derivative() const {
    UniPoly d;
    for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * Rat(static_cast<int>(i)));
    d.trim();
    return d;
  }

  UniPoly operator-() const {
    UniPoly r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    UniPoly r = a;
    if (r.c.size() < b.c.size()) r.c.resize(b.c.size(), Rat(0));
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
  }

  /// Exact interpolating polynomial through distinct nodes (Lagrange form).
  static UniPoly interpolate(const std::vector<std::pair<Rat, Rat>>& pts) {
    UniPoly total;
    total.c.assign(pts.size(), Rat(0));
    for (size_t i = 0; i < pts.size(); ++i) {
      // basis_i = prod_{j != i} (x - x_j) / (x_i - x_j)
      RatVec basis{Rat(1)};
      Rat denom = 1;
      for (size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        denom *= pts[i].first - pts[j].first;
        RatVec next(basis.size() + 1, Rat(0));
        for (size_t k = 0; k < basis.size(); ++k) {
          next[k + 1] += basis[k];
          next[k] -= basis[k] * pts[j].first;
        }
        basis = std::move(next);
      }
      Rat w = pts[i].second / denom;
      for (size_t k = 0; k < basis.size(); ++k) total.c[k] += w * basis[k];
    }
    total.trim();
    return total;
  }
};

namespace detail {

/// Remainder of a by b (b nonzero), exact.
inline UniPoly poly_rem(UniPoly a, const UniPoly& b) {
  a.trim();
  while (!a.is_zero() && a.degree() >= b.degree()) {
    Rat f = a.c.back() / b.c.back();
    int shift = a.degree() - b.degree();
    for (int i = 0; i <= b.degree(); ++i) a.c[i + shift] -= f * b.c[i];
    a.trim();
  }
  return a;
}

}  // namespace detail

/// Sturm chain p, p', -rem(...), ...; counts distinct real roots even for
/// non-square-free input (the chain terminates at a gcd multiple).
inline std::vector<UniPoly> sturm_chain(UniPoly p) {
  std::vector<UniPoly> chain;
  p.trim();
  if (p.is_zero()) return chain;
  chain.push_back(p);
  UniPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    UniPoly r = detail::poly_rem(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

inline int sturm_sign_variations(const std::vector<UniPoly>& chain, const Rat& x) {
  int last = 0, var = 0;
  for (const auto& q : chain) {
    int s = sgn(q.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

/// Number of distinct real roots in the half-open interval (a, b].
inline int sturm_count(const std::vector<UniPoly>& chain, const Rat& a, const Rat& b) {
  if (chain.empty()) return 0;
  return sturm_sign_variations(chain, a) - sturm_sign_variations(chain, b);
}

/// The rational with the smallest denominator (then smallest |numerator|)
/// in the closed interval [a, b]; classic Stern-Brocot argument.
inline Rat simplest_rational_between(const Rat& a, const Rat& b) {
  if (a > b) throw std::invalid_argument("empty interval");
  if (a == b) return a;
  if (a <= 0 && 0 <= b) return Rat(0);
  if (b < 0) return -simplest_rational_between(-b, -a);
  // now 0 < a < b; ceil(a) = floor((num + den - 1) / den) for positive a
  ZInt num = ZInt(numerator(a)), den = ZInt(denominator(a));
  ZInt ca = (num + den - 1) / den;
  if (Rat(ca) <= b) return Rat(ca);  // an integer lies in [a, b]
  ZInt fa = num / den;               // floor(a), and no integer in (a, b]
  Rat fl(fa);
  return fl + Rat(1) / simplest_rational_between(Rat(1) / (b - fl), Rat(1) / (a - fl));
}

}  // namespace tkstab
