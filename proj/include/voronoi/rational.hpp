#pragma once

// Exact rational arithmetic on __int128 with p-adic bookkeeping: valuations,
// unit parts, p-power fractional parts, and the standard additive character.

#include "voronoi/modarith.hpp"

namespace voronoi {

namespace detail {
inline i128 igcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i128 t = a % b; a = b; b = t; }
  return a;
}
constexpr i128 kRatLimit = (i128)1 << 100;
}  // namespace detail

struct Rat {
  i128 num = 0;
  i128 den = 1;  // > 0

  Rat() = default;
  Rat(i64 n) : num(n), den(1) {}
  Rat(i128 n, i128 d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    i128 g = detail::igcd128(num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num > detail::kRatLimit || -num > detail::kRatLimit || den > detail::kRatLimit)
      throw std::overflow_error("Rat: magnitude exceeds 2^100 guard");
  }

  bool is_zero() const { return num == 0; }
  Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
  Rat operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
  Rat operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
  Rat operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::domain_error("Rat: division by zero");
    return Rat(num * o.den, den * o.num);
  }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }

  double to_double() const { return (double)num / (double)den; }

  // p-adic valuation; throws on zero.
  i64 val(i64 p) const {
    if (num == 0) throw std::domain_error("Rat::val of zero");
    i64 v = 0;
    i128 n = num < 0 ? -num : num;
    while (n % p == 0) { n /= p; ++v; }
    i128 d = den;
    while (d % p == 0) { d /= p; --v; }
    return v;
  }

  // Unit part mod p^k: with x = u * p^val, returns u mod p^k (coprime to p).
  i64 unit_mod(i64 p, int k) const {
    if (num == 0) throw std::domain_error("Rat::unit_mod of zero");
    i64 q = ipow(p, k);
    if (q == 1) return 0;
    i128 n = num < 0 ? -num : num;
    i128 d = den;
    while (n % p == 0) n /= p;
    while (d % p == 0) d /= p;
    i64 nm = (i64)(n % q), dm = (i64)(d % q);
    i64 u = mulmod(nm, invmod(dm, q), q);
    if (num < 0) u = imod(-u, q);
    return u;
  }

  // p-power fractional part as (a, p^m): {x}_p = a / p^m with 0 <= a < p^m.
  // Zero means x is p-integral.
  std::pair<i64, i64> frac_p(i64 p) const {
    if (num == 0) return {0, 1};
    i64 v = val(p);
    if (v >= 0) return {0, 1};
    i64 q = ipow(p, (int)(-v));
    i64 u = unit_mod(p, (int)(-v));
    return {u, q};
  }
};

inline Rat rat_pow(Rat b, i64 e) {
  Rat r(1);
  bool inv = e < 0;
  if (inv) e = -e;
  while (e-- > 0) r *= b;
  return inv ? Rat(1) / r : r;
}

// x = u * p^v from a unit-class representative u (coprime to p) and valuation v.
inline Rat rat_from_unit_val(i64 p, i64 u, i64 v) {
  if (u % p == 0) throw std::invalid_argument("rat_from_unit_val: u not a unit");
  Rat r(u);
  return v >= 0 ? r * rat_pow(Rat(p), v) : r / rat_pow(Rat(p), -v);
}

// psi_p(x) = e({x}_p): the standard additive character of Q_p, trivial exactly
// on Z_p.  The sign e(+{x}_p) pairs with psi_inf(x) = e(-x) so that the product
// over all places is trivial on Q.
inline cplx psi_p(const Rat& x, i64 p) {
  auto [a, q] = x.frac_p(p);
  return e_frac(a, q);
}

inline cplx psi_p_conj(const Rat& x, i64 p) {
  auto [a, q] = x.frac_p(p);
  return e_frac(-a, q);
}

}  // namespace voronoi
