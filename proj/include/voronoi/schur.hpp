#pragma once

// Schur polynomials s_lambda(t_1, ..., t_n) for weakly decreasing integer
// vectors lambda (negative parts allowed; they contribute a power of the
// product t_1...t_n).  Three evaluation routes: bialternant determinant,
// Jacobi-Trudi in complete homogeneous polynomials, and semistandard-tableau
// enumeration for small weights.

#include <functional>

#include "voronoi/modarith.hpp"

namespace voronoi {

using Partition = std::vector<i64>;  // weakly decreasing where required

inline bool is_dominant(const Partition& lam) {
  for (size_t i = 1; i < lam.size(); ++i)
    if (lam[i - 1] < lam[i]) return false;
  return true;
}

namespace detail {

// lambda -> (nonnegative partition, power of det) via the shift by lambda_n.
inline std::pair<Partition, i64> normalize_partition(const Partition& lam) {
  if (lam.empty()) return {{}, 0};
  i64 last = lam.back();
  Partition mu(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) mu[i] = lam[i] - last;
  return {mu, last};
}

inline cplx cpow_int(cplx t, i64 e) {
  if (e == 0) return {1.0, 0.0};
  bool inv = e < 0;
  if (inv) e = -e;
  cplx r = 1, b = t;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return inv ? 1.0 / r : r;
}

inline cplx det_complex(std::vector<std::vector<cplx>> M) {
  size_t n = M.size();
  cplx det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) == 0.0) return {0.0, 0.0};
    if (piv != col) { std::swap(M[piv], M[col]); det = -det; }
    det *= M[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      cplx f = M[r][col] / M[col][col];
      for (size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
    }
  }
  return det;
}

}  // namespace detail

// det(t_j^{lambda_i + n - i}) / det(t_j^{n - i}); requires pairwise distinct t.
inline cplx schur_bialternant(const Partition& lam, const std::vector<cplx>& t) {
  size_t n = t.size();
  if (lam.size() != n) throw std::invalid_argument("schur: lambda size != n");
  if (!is_dominant(lam)) throw std::invalid_argument("schur: lambda not weakly decreasing");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(t[i] - t[j]) < 1e-12)
        throw std::invalid_argument("schur_bialternant: entries must be distinct");
  std::vector<std::vector<cplx>> num(n, std::vector<cplx>(n)), den(n, std::vector<cplx>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      num[i][j] = detail::cpow_int(t[j], lam[i] + (i64)(n - 1 - i));
      den[i][j] = detail::cpow_int(t[j], (i64)(n - 1 - i));
    }
  return detail::det_complex(num) / detail::det_complex(den);
}

// Jacobi-Trudi: s_mu = det(h_{mu_i - i + j}) over complete homogeneous h_k,
// after normalising away negative parts.
inline cplx schur_jacobi_trudi(const Partition& lam, const std::vector<cplx>& t) {
  size_t n = t.size();
  if (lam.size() != n) throw std::invalid_argument("schur: lambda size != n");
  if (!is_dominant(lam)) throw std::invalid_argument("schur: lambda not weakly decreasing");
  auto [mu, shift] = detail::normalize_partition(lam);
  cplx detpow = 1;
  for (auto& x : t) detpow *= x;
  detpow = detail::cpow_int(detpow, shift);

  size_t r = mu.size();
  while (r > 0 && mu[r - 1] == 0) --r;
  if (r == 0) return detpow;
  i64 hmax = mu[0] + (i64)r;
  // e_i from prod (1 + t_i z), then h_k from sum_{i} (-1)^{i-1} e_i h_{k-i}
  std::vector<cplx> e(n + 1, cplx{0, 0});
  e[0] = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t k = std::min(n, i + 1); k >= 1; --k) e[k] += e[k - 1] * t[i];
  std::vector<cplx> h(hmax + 1, cplx{0, 0});
  h[0] = 1;
  for (i64 k = 1; k <= hmax; ++k) {
    cplx s = 0;
    for (size_t i = 1; i <= n && (i64)i <= k; ++i)
      s += (i % 2 == 1 ? 1.0 : -1.0) * e[i] * h[k - i];
    h[k] = s;
  }
  auto H = [&](i64 k) -> cplx {
    if (k < 0) return {0, 0};
    return h[k];
  };
  std::vector<std::vector<cplx>> M(r, std::vector<cplx>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      M[i][j] = H(mu[i] - (i64)i + (i64)j);
  return detpow * detail::det_complex(M);
}

// Sum over semistandard tableaux of shape mu with entries in {1, ..., n}.
// Intended for |mu| <= 8 or so.
inline cplx schur_tableaux(const Partition& lam, const std::vector<cplx>& t) {
  size_t n = t.size();
  if (lam.size() != n) throw std::invalid_argument("schur: lambda size != n");
  if (!is_dominant(lam)) throw std::invalid_argument("schur: lambda not weakly decreasing");
  auto [mu, shift] = detail::normalize_partition(lam);
  cplx detpow = 1;
  for (auto& x : t) detpow *= x;
  detpow = detail::cpow_int(detpow, shift);

  std::vector<i64> rows;
  for (i64 m : mu)
    if (m > 0) rows.push_back(m);
  if (rows.empty()) return detpow;
  if ((size_t)rows.size() > n) return {0, 0};  // more rows than variables

  // fill cells row-major; entry constraints: weakly increasing along rows,
  // strictly increasing down columns
  std::vector<std::vector<int>> fill(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) fill[i].assign(rows[i], 0);
  cplx total = 0;
  std::function<void(size_t, i64, cplx)> rec = [&](size_t row, i64 col, cplx prod) {
    if (row == rows.size()) { total += prod; return; }
    i64 ncols = rows[row];
    if (col == ncols) { rec(row + 1, 0, prod); return; }
    int lo = 1;
    if (col > 0) lo = std::max(lo, fill[row][col - 1]);
    if (row > 0 && col < rows[row - 1]) lo = std::max(lo, fill[row - 1][col] + 1);
    for (int v = lo; v <= (int)n; ++v) {
      fill[row][col] = v;
      rec(row, col + 1, prod * t[v - 1]);
    }
  };
  rec(0, 0, detpow);
  return total;
}

// Preferred evaluator: bialternant when the entries are distinct, Jacobi-Trudi
// otherwise.  Memoisation is left to callers with repeated (lambda, t) pairs.
inline cplx schur(const Partition& lam, const std::vector<cplx>& t) {
  bool distinct = true;
  for (size_t i = 0; i < t.size() && distinct; ++i)
    for (size_t j = i + 1; j < t.size(); ++j)
      if (std::abs(t[i] - t[j]) < 1e-9) { distinct = false; break; }
  return distinct ? schur_bialternant(lam, t) : schur_jacobi_trudi(lam, t);
}

}  // namespace voronoi
