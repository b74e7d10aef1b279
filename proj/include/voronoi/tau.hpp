#pragma once

// Ramanujan tau via the eta product: q prod (1 - q^m)^24 expanded with the
// pentagonal-number series and repeated squaring.  Coefficients are exact
// 128-bit integers; magnitudes near n = 1e5 approach the guard, so n_max is
// capped there.

#include <string>
#include <vector>

#include "voronoi/modarith.hpp"

namespace voronoi {

namespace detail {

inline void mul_trunc_i128(std::vector<i128>& a, const std::vector<i128>& b, size_t nmax) {
  std::vector<i128> out(nmax + 1, 0);
  constexpr i128 guard = (i128)1 << 124;
  for (size_t i = 0; i <= nmax && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j <= nmax && j < b.size(); ++j) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
      if (out[i + j] > guard || -out[i + j] > guard)
        throw std::overflow_error("tau_coefficients: 128-bit overflow");
    }
  }
  a = std::move(out);
}

}  // namespace detail

// tau(1..n_max); index 0 is unused (zero).
inline std::vector<i128> tau_coefficients(i64 n_max) {
  if (n_max < 1) throw std::invalid_argument("tau_coefficients: n_max >= 1");
  if (n_max > 100000)
    throw std::invalid_argument("tau_coefficients: n_max capped at 1e5 (128-bit coefficients)");
  size_t N = (size_t)n_max;  // need eta-power coefficients up to N-1
  // pentagonal expansion of prod (1 - q^m)
  std::vector<i128> eta(N, 0);
  eta[0] = 1;
  for (i64 k = 1;; ++k) {
    i64 g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
    if (g1 >= (i64)N && g2 >= (i64)N) break;
    i128 s = (k % 2 == 0) ? 1 : -1;
    if (g1 < (i64)N) eta[g1] += s;
    if (g2 < (i64)N) eta[g2] += s;
  }
  std::vector<i128> e3 = eta;
  detail::mul_trunc_i128(e3, eta, N - 1);
  detail::mul_trunc_i128(e3, eta, N - 1);          // eta^3
  std::vector<i128> e6 = e3;
  detail::mul_trunc_i128(e6, e3, N - 1);           // eta^6
  std::vector<i128> e12 = e6;
  detail::mul_trunc_i128(e12, e6, N - 1);          // eta^12
  std::vector<i128> e24 = e12;
  detail::mul_trunc_i128(e24, e12, N - 1);         // eta^24
  std::vector<i128> tau(N + 1, 0);
  for (size_t n = 1; n <= (size_t)n_max; ++n) tau[n] = e24[n - 1];
  return tau;
}

inline std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) { s.push_back('0' + (char)(v % 10)); v /= 10; }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

}  // namespace voronoi
