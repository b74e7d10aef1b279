#pragma once

// Local geometric side: Lambda-sets, local hyper-Kloosterman sums, the
// delta-matrix bookkeeping, and the hyper-Kloosterman integral
//
//   H_v(y; zeta, xi) = int_{F^{n-2}} W~( [[y,,],[x,1,],[,,1]] [[1,],[,w_{n-1}]]
//                                        t(n(-zeta)) xi^{-1} ) dx
//
// evaluated as an exact Riemann sum over p-adic cells.  The machine check of
// the closed-form expansion H = sum_t Kl(y,t) W~(a(y) delta(t)) is the
// correctness core for the whole dual-side assembly.

#include <limits>

#include "voronoi/localrep.hpp"
#include "voronoi/rational.hpp"

namespace voronoi {

// Diagonal (t_2, ..., t_{n-1}) with |t_i| >= 1, stored exactly.
struct ToralElement {
  i64 p = 2;
  std::vector<Rat> t;

  static ToralElement from_vals(i64 p, const std::vector<i64>& evals) {
    ToralElement T;
    T.p = p;
    for (i64 e : evals) {
      if (e > 0) throw std::invalid_argument("ToralElement: valuations must be <= 0");
      T.t.push_back(rat_from_unit_val(p, 1, e));
    }
    return T;
  }
};

struct ShiftModulus {
  i64 p = 2;
  Rat zeta;               // may be zero (no twist)
  std::vector<Rat> xi;    // diag(xi_1, ..., xi_n), nonzero entries

  static ShiftModulus trivial(i64 p, int n) {
    ShiftModulus s;
    s.p = p;
    s.zeta = Rat(0);
    s.xi.assign(n, Rat(1));
    return s;
  }
};

// Representatives of t o^x / o: for |t| = p^e > 1 these are a p^{-e} with a
// running over (Z/p^e)^x; for |t| = 1 the singleton {1}.
inline std::vector<Rat> lambda_set(i64 p, const Rat& t) {
  i64 v = t.val(p);
  if (v > 0) throw std::invalid_argument("lambda_set: |t| >= 1 required");
  if (v == 0) return {Rat(1)};
  std::vector<Rat> out;
  for (i64 a : unit_class_reps(p, (int)(-v))) out.push_back(rat_from_unit_val(p, a, v));
  return out;
}

namespace detail {

inline bool branch_one(i64 p, const ShiftModulus& sm) {
  // |zeta xi_1^{-1} xi_2| >= 1, with zeta = 0 forced into the other branch
  if (sm.zeta.is_zero()) return false;
  i64 v = sm.zeta.val(p) - sm.xi[0].val(p) + sm.xi[1].val(p);
  return v <= 0;
}

inline Rat effective_zeta(i64 p, const ShiftModulus& sm) {
  return branch_one(p, sm) ? sm.zeta : sm.xi[0] / sm.xi[1];
}

}  // namespace detail

// Local hyper-Kloosterman sum Kl_v(y, t; zeta, xi).  For n >= 3 this is the
// displayed nested sum; for n = 2 the integral collapses and the value is
// psi(y / zeta_eff) with no prefactor.
inline cplx kl_local(const Rat& y, const ToralElement& t, const ShiftModulus& sm) {
  const i64 p = sm.p;
  const int n = (int)sm.xi.size();
  if ((int)t.t.size() != std::max(0, n - 2))
    throw std::invalid_argument("kl_local: toral element size mismatch");
  Rat zeta = detail::effective_zeta(p, sm);
  if (n == 2) return psi_p(y / zeta, p);

  // prefactor |xi_2 zeta|^{n-2} |xi_3 ... xi_n|^{-1} psi(-xi_2 / xi_3)
  i64 pref_val = (i64)(n - 2) * (sm.xi[1].val(p) + zeta.val(p));
  for (int i = 3; i <= n; ++i) pref_val -= sm.xi[i - 1].val(p);
  double prefac = std::pow((double)p, -(double)pref_val);  // |x| = p^{-v(x)}
  cplx pref = prefac * psi_p(-(sm.xi[1] / sm.xi[2]), p);

  Rat ycoef = y / zeta / sm.xi[1] * sm.xi[n - 1];
  if (n % 2 == 1) ycoef = -ycoef;  // (-1)^n

  // nested sum over x_i in Lambda_{t_i}, i = 2..n-1 (index i-2 in t.t)
  std::vector<std::vector<Rat>> lambdas;
  for (auto& ti : t.t) lambdas.push_back(lambda_set(p, ti));
  cplx total = 0;
  std::vector<const Rat*> pick(lambdas.size());
  std::function<void(size_t)> rec = [&](size_t idx) {
    if (idx == lambdas.size()) {
      Rat arg = ycoef;
      for (auto* x : pick) arg = arg / *x;
      cplx term = psi_p(arg, p);
      for (size_t j = 0; j < pick.size(); ++j) {
        // pick index 0 is the variable x_2: phase psi(xi_{n-j+1} xi_{n-j+2}^{-1} x_j)
        int jj = (int)j + 2;
        term *= psi_p(sm.xi[n - jj] / sm.xi[n - jj + 1] * (*pick[j]), p);
      }
      total += term;
      return;
    }
    for (auto& x : lambdas[idx]) { pick[idx] = &x; rec(idx + 1); }
  };
  rec(0);
  return pref * total;
}

// delta_v(t; zeta, xi): the diagonal matrix multiplying a(y) inside the dual
// Whittaker argument.
inline std::vector<Rat> delta_matrix(const ToralElement& t, const ShiftModulus& sm) {
  const i64 p = sm.p;
  const int n = (int)sm.xi.size();
  Rat dett(1);
  for (auto& ti : t.t) dett *= ti;
  std::vector<Rat> d(n);
  if (detail::branch_one(p, sm)) {
    d[0] = Rat(1) / (sm.zeta * dett * sm.xi[1]);
    d[n - 1] = sm.zeta / sm.xi[0];
  } else {
    d[0] = Rat(1) / (sm.xi[0] * dett);
    d[n - 1] = Rat(1) / sm.xi[1];
  }
  for (int i = 2; i <= n - 1; ++i) d[i - 1] = t.t[i - 2] / sm.xi[n + 1 - i];
  return d;
}

// ---------------------------------------------------------------------------
// Exact evaluation of the spherical dual Whittaker function at a rational
// matrix: Iwasawa-decompose by column reduction over Z_p, read the psi-bar
// phase off the superdiagonal, and apply Shintani on the diagonal valuations.

namespace detail {

inline i64 rat_val_or_max(const Rat& x, i64 p) {
  return x.is_zero() ? std::numeric_limits<i64>::max() / 4 : x.val(p);
}

}  // namespace detail

// W~(g) for the GL_n(o)-fixed vector of the representation with Satake
// parameters `whittaker_params` in the psi-bar model.
inline cplx whittaker_value(std::vector<std::vector<Rat>> M, const SatakeParams& whittaker_params) {
  const i64 p = whittaker_params.p;
  const int n = whittaker_params.n();
  if ((int)M.size() != n) throw std::invalid_argument("whittaker_value: matrix size mismatch");

  // column reduction from the bottom row up; all multipliers lie in Z_p
  for (int row = n - 1; row >= 0; --row) {
    int piv = -1;
    i64 best = 0;
    for (int j = 0; j <= row; ++j) {
      i64 v = detail::rat_val_or_max(M[row][j], p);
      if (piv < 0 || v < best) { piv = j; best = v; }
    }
    if (M[row][piv].is_zero()) throw std::invalid_argument("whittaker_value: singular matrix");
    if (piv != row)
      for (int r = 0; r < n; ++r) std::swap(M[r][piv], M[r][row]);
    for (int j = 0; j < row; ++j) {
      if (M[row][j].is_zero()) continue;
      Rat f = M[row][j] / M[row][row];
      for (int r = 0; r <= row; ++r) M[r][j] -= f * M[r][row];
    }
  }
  // now upper triangular: diagonal t_i, superdiagonal phase
  Partition lam(n);
  for (int i = 0; i < n; ++i) {
    if (M[i][i].is_zero()) throw std::invalid_argument("whittaker_value: singular diagonal");
    lam[i] = M[i][i].val(p);
  }
  if (!is_dominant(lam)) return {0.0, 0.0};
  Rat phase_arg(0);
  for (int i = 0; i + 1 < n; ++i) phase_arg += M[i][i + 1] / M[i + 1][i + 1];
  cplx phase = psi_p_conj(phase_arg, p);
  return phase * shintani_whittaker(lam, whittaker_params);
}

struct HkOptions {
  int domain_exp = -1;    // A: integrate over |x_i| <= p^A; negative = auto
  int shell_pad = -1;     // unit-class padding on the |x| = p^e shells
  int interior_exp = -1;  // interior Z_p sampled at cells of size p^{-interior_exp}
};

namespace detail {

// One-dimensional cell decomposition of p^{-A} Z_p: the interior Z_p as
// uniform cells of size p^{-ell0}, plus each shell |x| = p^e (1 <= e <= A) as
// unit classes at level e + pad, of additive volume p^{-pad} apiece.  The
// integrand is locally constant at these scales once pad and ell0 are large
// enough; refinement checks sit in the caller.
inline void padic_line_points(i64 p, int A, int pad, int ell0,
                              std::vector<std::pair<Rat, double>>& out) {
  out.clear();
  i64 q0 = ipow(p, ell0);
  double w0 = std::pow((double)p, -(double)ell0);
  for (i64 c = 0; c < q0; ++c) out.emplace_back(Rat(c), w0);
  for (int e = 1; e <= A; ++e) {
    double w = std::pow((double)p, -(double)pad);
    Rat scale = Rat(1) / rat_pow(Rat(p), e);
    for (i64 u : unit_class_reps(p, e + pad)) out.emplace_back(Rat(u) * scale, w);
  }
}

// Flat product-grid fallback for n >= 4 (dimension-generic, cost-exponential).
inline cplx hk_integral_multidim(const Rat& y, const ShiftModulus& sm,
                                 const SatakeParams& dual_satake, int n,
                                 const std::vector<std::vector<Rat>>& R, const HkOptions& opts) {
  const i64 p = sm.p;
  i64 vz = sm.zeta.is_zero() ? 0 : std::min<i64>(sm.zeta.val(p), 0);
  i64 vxi = 0;
  for (auto& x : sm.xi) vxi = std::max(vxi, std::abs(x.val(p)));
  i64 vy_neg = std::max<i64>(0, -y.val(p));
  int A = opts.domain_exp >= 0 ? opts.domain_exp : (int)(-vz + vxi + vy_neg + 1);
  int pad = opts.shell_pad >= 0 ? opts.shell_pad : (int)(vxi - vz + 2);
  int ell0 = opts.interior_exp >= 0 ? opts.interior_exp : (int)(-vz + vxi + 2);

  const int dim = n - 2;
  std::vector<std::pair<Rat, double>> pts;
  padic_line_points(p, A, pad, ell0, pts);
  cplx total = 0;
  std::vector<size_t> c(dim, 0);
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n));
  while (true) {
    double weight = 1.0;
    for (int i = 0; i < dim; ++i) weight *= pts[c[i]].second;
    for (int col = 0; col < n; ++col) {
      M[0][col] = y * R[0][col];
      for (int i = 0; i < dim; ++i) M[i + 1][col] = pts[c[i]].first * R[0][col] + R[i + 1][col];
      M[n - 1][col] = R[n - 1][col];
    }
    total += weight * whittaker_value(M, dual_satake);
    int j = 0;
    for (; j < dim; ++j) {
      if (++c[j] < pts.size()) break;
      c[j] = 0;
    }
    if (j == dim) break;
  }
  return total;
}

}  // namespace detail

// The hyper-Kloosterman integral as an exact finite Riemann sum over p-adic
// cells.  `dual_satake` holds the contragredient (inverse) Satake parameters.
// With default options each shell refines itself until two consecutive levels
// agree; explicit options force a fixed decomposition (for stability tests).
inline cplx hk_integral_bruteforce(const Rat& y, const ShiftModulus& sm,
                                   const SatakeParams& dual_satake, int n,
                                   const HkOptions& opts = {}) {
  const i64 p = sm.p;
  if (dual_satake.n() != n) throw std::invalid_argument("hk_integral: rank mismatch");
  if (y.is_zero()) throw std::invalid_argument("hk_integral: y must be nonzero");

  // fixed right factor: blkdiag(1, w_{n-1}) * t(n(-zeta)) * xi^{-1}
  std::vector<std::vector<Rat>> R(n, std::vector<Rat>(n, Rat(0)));
  R[0][0] = Rat(1);
  for (int i = 1; i < n; ++i) R[i][n - i] = Rat(1);  // w_{n-1} block, antidiagonal
  // multiply by t(n(-zeta)) = I - zeta E_{21} on the right: col_1 -= zeta * col_2
  if (!sm.zeta.is_zero())
    for (int r = 0; r < n; ++r) R[r][0] -= sm.zeta * R[r][1];
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!R[r][c].is_zero()) R[r][c] /= sm.xi[c];

  if (n == 2) {
    std::vector<std::vector<Rat>> M(2, std::vector<Rat>(2, Rat(0)));
    for (int c = 0; c < 2; ++c) {
      M[0][c] = y * R[0][c];
      M[1][c] = R[1][c];
    }
    return whittaker_value(M, dual_satake);
  }
  if (n != 3)
    return detail::hk_integral_multidim(y, sm, dual_satake, n, R, opts);

  // n = 3: one integration variable; evaluate f(x) = W~(M(x))
  auto f = [&](const Rat& x) {
    std::vector<std::vector<Rat>> M(3, std::vector<Rat>(3));
    for (int col = 0; col < 3; ++col) {
      M[0][col] = y * R[0][col];
      M[1][col] = x * R[0][col] + R[1][col];
      M[2][col] = R[2][col];
    }
    return whittaker_value(M, dual_satake);
  };

  i64 vz = sm.zeta.is_zero() ? 0 : std::min<i64>(sm.zeta.val(p), 0);
  i64 vxi = 0;
  for (auto& x : sm.xi) vxi = std::max(vxi, std::abs(x.val(p)));
  i64 vy = std::abs(y.val(p));

  // interior Z_p: refine the uniform cell level until two levels agree
  auto interior_sum = [&](int ell0) {
    cplx s = 0;
    i64 q0 = ipow(p, ell0);
    for (i64 c = 0; c < q0; ++c) s += f(Rat(c));
    return s * std::pow((double)p, -(double)ell0);
  };
  // shell |x| = p^e: unit classes at level e + pad
  auto shell_sum = [&](int e, int pad) {
    cplx s = 0;
    Rat scale = Rat(1) / rat_pow(Rat(p), e);
    for (i64 u : unit_class_reps(p, e + pad)) s += f(Rat(u) * scale);
    return s * std::pow((double)p, -(double)pad);
  };
  auto stable = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); };

  cplx total;
  if (opts.interior_exp >= 0) {
    total = interior_sum(opts.interior_exp);
  } else {
    int ell0 = (int)std::min<i64>(-vz + vxi + 1, 7);
    cplx prev = interior_sum(ell0);
    for (int it = 0; it < 8; ++it) {
      cplx cur = interior_sum(++ell0);
      bool ok = stable(prev, cur);
      prev = cur;
      if (ok) break;
    }
    total = prev;
  }
  // the integrand's live region scales with |y| (the first change of
  // variables multiplies x by y), so empty low shells must not stop the sweep
  // before max(0, v(y))-deep shells have been reached
  i64 vy_neg = std::max<i64>(0, -y.val(p));  // |y| = p^{-v(y)} large means v(y) < 0
  int live_bound = (int)(-vz + 2 * vxi + vy_neg) + 1;
  int A_hard = opts.domain_exp >= 0 ? opts.domain_exp : live_bound + 3;
  int zero_streak = 0;
  for (int e = 1; e <= A_hard; ++e) {
    cplx se;
    if (opts.shell_pad >= 0) {
      se = shell_sum(e, opts.shell_pad);
    } else {
      int pad = 1;
      cplx prev = shell_sum(e, pad);
      for (int it = 0; it < 6; ++it) {
        cplx cur = shell_sum(e, ++pad);
        bool ok = stable(prev, cur);
        prev = cur;
        if (ok) break;
      }
      se = prev;
    }
    total += se;
    if (opts.domain_exp < 0 && e >= live_bound) {
      // beyond the support scale the shells vanish identically; stop after
      // two consecutive empty ones
      if (std::abs(se) < 1e-15) { if (++zero_streak >= 2) break; }
      else zero_streak = 0;
    }
  }
  return total;
}

struct GeometricIdentityReport {
  cplx integral;       // brute-force H_v
  cplx expansion;      // sum_t Kl * W~(a(y) delta)
  double residual;
  int t_terms;         // nonzero Whittaker terms in the t-sum
  int domain_exp, cell_exp;
};

// W~ on the diagonal a(y) * delta: only the valuations matter.
inline cplx whittaker_value_diag(const Rat& y, const std::vector<Rat>& d,
                                 const SatakeParams& wp) {
  Partition lam(d.size());
  lam[0] = (y * d[0]).val(wp.p);
  for (size_t i = 1; i < d.size(); ++i) lam[i] = d[i].val(wp.p);
  return shintani_whittaker(lam, wp);
}

// Closed-form side: sum over t in T^1 truncated by the Whittaker support
// chain, with a margin so that enlarging the window is checked to be inert.
inline cplx kl_expansion_sum(const Rat& y, const ShiftModulus& sm,
                             const SatakeParams& dual_satake, int n, int extra_margin,
                             int* nonzero_terms = nullptr) {
  const i64 p = sm.p;
  const int dim = n - 2;
  Rat zeta_eff = detail::effective_zeta(p, sm);
  int terms = 0;
  cplx total = 0;
  // cap: from the chain -e_i - v(xi_{n+2-i}) >= v(zeta_eff) - v(xi_1)
  std::vector<i64> cap(dim, 0);
  for (int i = 2; i <= n - 1; ++i) {
    i64 bound = sm.xi[0].val(p) - sm.xi[n + 1 - i].val(p) - zeta_eff.val(p);
    cap[i - 2] = std::max<i64>(0, bound) + extra_margin;
  }
  std::vector<i64> e(dim, 0);
  while (true) {
    ToralElement t;
    t.p = p;
    for (int i = 0; i < dim; ++i) t.t.push_back(rat_from_unit_val(p, 1, -e[i]));
    cplx w = whittaker_value_diag(y, delta_matrix(t, sm), dual_satake);
    if (std::abs(w) > 0.0) {
      total += kl_local(y, t, sm) * w;
      ++terms;
    }
    int j = 0;
    for (; j < dim; ++j) {
      if (++e[j] <= cap[j]) break;
      e[j] = 0;
    }
    if (j == dim) break;
  }
  if (nonzero_terms) *nonzero_terms = terms;
  return total;
}

inline GeometricIdentityReport verify_geometric_identity(const Rat& y, const ShiftModulus& sm,
                                                         const SatakeParams& dual_satake, int n,
                                                         const HkOptions& opts = {}) {
  GeometricIdentityReport rep{};
  rep.integral = hk_integral_bruteforce(y, sm, dual_satake, n, opts);
  rep.domain_exp = opts.domain_exp;
  rep.cell_exp = opts.interior_exp;
  rep.expansion = kl_expansion_sum(y, sm, dual_satake, n, 2, &rep.t_terms);
  rep.residual = std::abs(rep.integral - rep.expansion);
  return rep;
}

}  // namespace voronoi
