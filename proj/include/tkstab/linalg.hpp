#pragma once

#include <optional>
#include <vector>

#include "tkstab/rational.hpp"

namespace tkstab {

using RatMat = std::vector<RatVec>;

/// Reduces `m` in place to row echelon form and returns its rank.
/// Pivot choice is the first row with a nonzero entry, so the result is
/// deterministic; with exact arithmetic no pivot-magnitude strategy is needed.
inline int row_echelon(RatMat& m) {
  if (m.empty()) return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

inline int rank(RatMat m) { return row_echelon(m); }

inline Rat determinant(RatMat m) {
  const size_t n = m.size();
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != c) {
      std::swap(m[c], m[piv]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

/// Solves the square system A x = b exactly; nullopt when A is singular.
inline std::optional<RatVec> solve_linear(RatMat a, RatVec b) {
  const size_t n = a.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  RatVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline std::optional<RatMat> inverse(const RatMat& a) {
  const size_t n = a.size();
  RatMat aug(n, RatVec(2 * n, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && aug[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(aug[c], aug[piv]);
    Rat d = aug[c][c];
    for (size_t j = 0; j < 2 * n; ++j) aug[c][j] /= d;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      Rat f = aug[i][c];
      for (size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[c][j];
    }
  }
  RatMat inv(n, RatVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Basis of the null space of an arbitrary (possibly non-square) matrix.
inline std::vector<RatVec> nullspace(RatMat m, int ncols) {
  std::vector<int> pivot_col;
  const size_t rows = m.size();
  size_t r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    Rat d = m[r][c];
    for (int j = 0; j < ncols; ++j) m[r][j] /= d;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int j = 0; j < ncols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<RatVec> basis;
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (int fc = 0; fc < ncols; ++fc) {
    if (is_pivot[fc]) continue;
    RatVec v(ncols, Rat(0));
    v[fc] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Dimension of the affine hull of a point set.
inline int affine_rank(const std::vector<RatVec>& pts) {
  if (pts.empty()) return -1;
  RatMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) {
    RatVec d(pts[0].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  if (diffs.empty()) return 0;
  return rank(std::move(diffs));
}

}  // namespace tkstab
