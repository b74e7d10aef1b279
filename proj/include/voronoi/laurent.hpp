#pragma once

// Formal Laurent series and rational functions in one variable with complex
// coefficients.  The variable is X = q^{-s} on the gamma-factor side and
// Z = q^{it} on the Mellin-spectrum side; both live here.

#include <cassert>

#include "voronoi/modarith.hpp"

namespace voronoi {

struct LaurentSeries {
  int lo = 0;                 // exponent of the first stored coefficient
  std::vector<cplx> a;        // a[i] is the coefficient of X^{lo+i}

  LaurentSeries() = default;
  static LaurentSeries zero() { return LaurentSeries(); }
  static LaurentSeries constant(cplx c) {
    LaurentSeries s;
    if (std::abs(c) != 0.0) { s.lo = 0; s.a = {c}; }
    return s;
  }
  static LaurentSeries monomial(cplx c, int k) {
    LaurentSeries s;
    s.lo = k; s.a = {c};
    return s;
  }

  bool is_zero() const { return a.empty(); }
  int hi() const { return lo + (int)a.size() - 1; }  // valid only if !is_zero()

  cplx coeff(int k) const {
    if (a.empty() || k < lo || k > hi()) return {0.0, 0.0};
    return a[k - lo];
  }

  void set_coeff(int k, cplx v) {
    if (a.empty()) { lo = k; a = {v}; return; }
    if (k < lo) {
      a.insert(a.begin(), lo - k, cplx{0, 0});
      lo = k;
    } else if (k > hi()) {
      a.resize(k - lo + 1, cplx{0, 0});
    }
    a[k - lo] = v;
  }

  void trim(double eps = 0.0) {
    size_t b = 0, e = a.size();
    while (b < e && std::abs(a[b]) <= eps) ++b;
    while (e > b && std::abs(a[e - 1]) <= eps) --e;
    a = std::vector<cplx>(a.begin() + b, a.begin() + e);
    lo += (int)b;
    if (a.empty()) lo = 0;
  }

  LaurentSeries operator+(const LaurentSeries& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    LaurentSeries r;
    r.lo = std::min(lo, o.lo);
    int hi_ = std::max(hi(), o.hi());
    r.a.assign(hi_ - r.lo + 1, cplx{0, 0});
    for (size_t i = 0; i < a.size(); ++i) r.a[lo + (int)i - r.lo] += a[i];
    for (size_t i = 0; i < o.a.size(); ++i) r.a[o.lo + (int)i - r.lo] += o.a[i];
    return r;
  }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& c : r.a) c = -c;
    return r;
  }
  LaurentSeries operator-(const LaurentSeries& o) const { return *this + (-o); }

  LaurentSeries operator*(const LaurentSeries& o) const {
    LaurentSeries r;
    if (is_zero() || o.is_zero()) return r;
    r.lo = lo + o.lo;
    r.a.assign(a.size() + o.a.size() - 1, cplx{0, 0});
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < o.a.size(); ++j)
        r.a[i + j] += a[i] * o.a[j];
    return r;
  }

  LaurentSeries operator*(cplx c) const {
    LaurentSeries r = *this;
    for (auto& x : r.a) x *= c;
    return r;
  }

  // Drop every coefficient of exponent > hi_keep.
  LaurentSeries truncated(int hi_keep) const {
    LaurentSeries r;
    if (is_zero() || hi_keep < lo) return r;
    r.lo = lo;
    int n = std::min<int>((int)a.size(), hi_keep - lo + 1);
    r.a.assign(a.begin(), a.begin() + n);
    return r;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (auto& c : a) m = std::max(m, std::abs(c));
    return m;
  }
};

inline double max_coeff_difference(const LaurentSeries& x, const LaurentSeries& y,
                                   int lo, int hi) {
  double m = 0;
  for (int k = lo; k <= hi; ++k) m = std::max(m, std::abs(x.coeff(k) - y.coeff(k)));
  return m;
}

// num / den with finitely many terms each.  Inversion of den is the geometric
// expansion off its lowest-order term, which must be nonzero.
struct RationalFunction {
  LaurentSeries num;
  LaurentSeries den;  // must be nonzero

  RationalFunction() {
    num = LaurentSeries::constant(1);
    den = LaurentSeries::constant(1);
  }
  RationalFunction(LaurentSeries n, LaurentSeries d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::invalid_argument("RationalFunction: zero denominator");
  }
  static RationalFunction one() { return RationalFunction(); }
  static RationalFunction monomial(cplx c, int k) {
    RationalFunction r;
    r.num = LaurentSeries::monomial(c, k);
    return r;
  }

  RationalFunction operator*(const RationalFunction& o) const {
    return RationalFunction(num * o.num, den * o.den);
  }

  // Laurent expansion to exponent <= hi (expansion in ascending powers; the
  // region is |X| small, i.e. Re(s) large).
  LaurentSeries expand(int hi, std::string who = "") const {
    if (num.is_zero()) return LaurentSeries::zero();
    LaurentSeries d = den;
    d.trim(0.0);
    if (d.is_zero() || std::abs(d.a[0]) < 1e-300)
      throw std::runtime_error("RationalFunction::expand: vanishing leading denominator coefficient" +
                               (who.empty() ? "" : " in " + who));
    // inv = X^{-d.lo} / d.a[0] * (1 + u)^{-1}, u = higher terms of d / leading
    int terms = hi - (num.lo - d.lo) + 1;
    if (terms <= 0) return LaurentSeries::zero();
    std::vector<cplx> inv(terms, cplx{0, 0});
    inv[0] = 1.0 / d.a[0];
    for (int m = 1; m < terms; ++m) {
      cplx s = 0;
      for (int j = 1; j <= m && j < (int)d.a.size(); ++j) s += d.a[j] * inv[m - j];
      inv[m] = -s / d.a[0];
    }
    LaurentSeries invs;
    invs.lo = -d.lo;
    invs.a = std::move(inv);
    LaurentSeries r = num * invs;
    return r.truncated(hi);
  }

  // Substitute s -> 1 - s, i.e. X -> q^{-1} X^{-1}: exponent k maps to -k with
  // coefficient scaled by q^{-k}.
  RationalFunction substitute_one_minus_s(double q) const {
    auto flip = [&](const LaurentSeries& s) {
      LaurentSeries r;
      if (s.is_zero()) return r;
      for (int k = s.lo; k <= s.hi(); ++k) {
        cplx c = s.coeff(k);
        if (std::abs(c) == 0.0) continue;
        r.set_coeff(-k, c * std::pow(q, -(double)k));
      }
      return r;
    };
    return RationalFunction(flip(num), flip(den));
  }
};

}  // namespace voronoi
