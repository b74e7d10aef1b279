#pragma once

// The (n-1)-dimensional nested Kloosterman sum KL(x, y; q, c, d) and the
// twisted-root-number sum S_f over primitive Dirichlet characters.

#include <functional>

#include "voronoi/dirichlet.hpp"

namespace voronoi {

struct KloostermanSpec {
  int n = 2;                // dimension, n >= 2
  i64 q = 1;                // modulus, q >= 1
  std::vector<i64> c;       // (c_2, ..., c_{n-1}), nonzero
  std::vector<i64> d;       // (d_2, ..., d_{n-1}), nested divisibility

  // Layer moduli m_j = q c_2 ... c_{n-j+1} / (d_{n-1} ... d_j) for j = n-1..2,
  // stored as moduli[j-2].  Every one must be a positive integer.
  std::vector<i64> layer_moduli() const {
    if (n < 2) throw std::invalid_argument("KloostermanSpec: n >= 2 required");
    if (q < 1) throw std::invalid_argument("KloostermanSpec: q >= 1 required");
    if ((int)c.size() != n - 2 || (int)d.size() != n - 2)
      throw std::invalid_argument("KloostermanSpec: need n-2 shifts and divisors");
    std::vector<i64> m(std::max(0, n - 2));
    i64 num = q;
    // j descending from n-1 to 2; c_2...c_{n-j+1} has indices 2..n-j+1
    for (int j = n - 1; j >= 2; --j) {
      num = q;
      for (int i = 2; i <= n - j + 1; ++i) num *= std::abs(c[i - 2]);
      i64 den = 1;
      for (int jj = n - 1; jj >= j; --jj) den *= d[jj - 2];
      if (den == 0 || num % den != 0)
        throw std::invalid_argument("KloostermanSpec: divisibility chain violated");
      m[j - 2] = num / den;
      if (m[j - 2] <= 0)
        throw std::invalid_argument("KloostermanSpec: nonpositive layer modulus");
    }
    return m;
  }
};

// KL(x, y; q, c, d) as in the classical summation formula: nested sum over
// alpha_j running over units modulo the layer moduli, with phases
//   e((-1)^n x d_{n-1} alpha_{n-1} / q),
//   e(d_j alpha_j inv(alpha_{j+1}) / m_{j+1})   for j = n-2 .. 2,
//   e(y inv(alpha_2) / m_2).
// Every modular inverse is taken at the modulus of the layer in which it
// appears; a phase with modulus 1 is 1.
//
// The n = 2 value is the degenerate e(x y / q), fixed by the local geometric
// oracle (the hyper-Kloosterman integral collapses to psi(y / zeta)); see
// kloosterman_local.hpp for the test pinning this definition.
inline cplx kloosterman_classical(const KloostermanSpec& spec, i64 x, i64 y) {
  if (spec.n == 2) {
    if (spec.q < 1) throw std::invalid_argument("kloosterman: q >= 1 required");
    return e_frac(mulmod(imod(x, spec.q), imod(y, spec.q), spec.q), spec.q);
  }
  auto m = spec.layer_moduli();
  int n = spec.n;
  i64 sign = (n % 2 == 0) ? 1 : -1;

  // recursive descent over j = n-1, n-2, ..., 2
  cplx total = 0;
  std::vector<i64> alpha(n, 0);
  // iterative nested loops via explicit recursion
  std::function<void(int, cplx)> rec = [&](int j, cplx phase) {
    i64 mj = m[j - 2];
    for (i64 a = (mj == 1 ? 0 : 1); a < std::max<i64>(mj, 1); ++a) {
      if (mj > 1 && igcd(a, mj) != 1) continue;
      i64 aj = (mj == 1) ? 0 : a;
      cplx ph = phase;
      if (j == n - 1) {
        // top layer: e((-1)^n x d_{n-1} alpha_{n-1} / q)
        i64 num = mulmod(mulmod(imod(sign * x, spec.q), imod(spec.d[n - 3], spec.q), spec.q),
                         imod(aj, spec.q), spec.q);
        ph *= e_frac(num, spec.q);
      } else {
        // middle layer: e(d_j alpha_j inv(alpha_{j+1}) / m_{j+1})
        i64 mj1 = m[j - 1];
        if (mj1 > 1) {
          i64 inv_next = invmod(alpha[j + 1], mj1);
          i64 num = mulmod(mulmod(imod(spec.d[j - 2], mj1), imod(aj, mj1), mj1), inv_next, mj1);
          ph *= e_frac(num, mj1);
        }
      }
      alpha[j] = aj;
      if (j == 2) {
        // innermost: e(y inv(alpha_2) / m_2)
        i64 m2 = m[0];
        cplx ph2 = ph;
        if (m2 > 1) {
          i64 inv2 = invmod(alpha[2], m2);
          ph2 *= e_frac(mulmod(imod(y, m2), inv2, m2), m2);
        }
        total += ph2;
      } else {
        rec(j - 1, ph);
      }
      if (mj == 1) break;
    }
  };
  rec(n - 1, cplx{1.0, 0.0});
  return total;
}

// One-loop textbook Kloosterman sum S(x, y; q) = sum_{a mod q, (a,q)=1} e((xa + y a^{-1})/q).
inline cplx kloosterman_textbook(i64 x, i64 y, i64 q) {
  if (q == 1) return {1.0, 0.0};
  cplx s = 0;
  for (i64 a = 1; a < q; ++a) {
    if (igcd(a, q) != 1) continue;
    i64 inv = invmod(a, q);
    s += e_frac(mulmod(x, a, q) + mulmod(y, inv, q), q);
  }
  return s;
}

// S_f(m; a / (l q)) = sum over primitive chi mod l of
//   chi(-1)^{n-1} chi(m abar q) eps(1/2, f x chi) eps(1/2, chi^{-1}),
// with a abar = 1 mod l.  The twisted root numbers eps(1/2, f x chi) are
// supplied per primitive character; eps(1/2, chi^{-1}) comes from the Gauss
// sum normalisation shared with the p-adic module.
inline cplx s_f_sum(i64 ell, i64 m, i64 a, i64 q, int n,
                    const std::map<DirichletCharacter, cplx>& twisted_root_numbers) {
  if (ell < 1) throw std::invalid_argument("s_f_sum: ell >= 1 required");
  if (ell > 1 && (igcd(a, ell) != 1 || igcd(q, ell) != 1))
    throw std::invalid_argument("s_f_sum: a and q must be coprime to ell");
  i64 abar = invmod(a, ell);
  cplx total = 0;
  for (const auto& chi : enumerate_characters(ell)) {
    if (!chi.is_primitive()) continue;
    auto it = twisted_root_numbers.find(chi);
    if (it == twisted_root_numbers.end())
      throw std::invalid_argument("s_f_sum: missing twisted root number for a primitive character mod " +
                                  std::to_string(ell));
    cplx parity = chi(ell - 1);  // chi(-1)
    cplx sgn = (n - 1) % 2 == 0 ? cplx{1, 0} : parity;
    i64 arg = ell == 1 ? 0 : mulmod(mulmod(imod(m, ell), abar, ell), imod(q, ell), ell);
    total += sgn * chi(arg) * it->second * epsilon_half_of_inverse(chi);
  }
  return total;
}

inline i64 count_primitive_characters(i64 ell) {
  i64 c = 0;
  for (const auto& chi : enumerate_characters(ell))
    if (chi.is_primitive()) ++c;
  return c;
}

}  // namespace voronoi
