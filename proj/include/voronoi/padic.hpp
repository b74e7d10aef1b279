#pragma once

// Locally constant compactly supported functions on Q_p^x, multiplicative
// characters of finite conductor with chi(p) = 1, p-adic Gauss sums, and the
// Mellin transform / inversion pair.
//
// Haar measure convention: d^x y gives Z_p^x total mass 1, so integrals over
// unit classes are plain averages.

#include "voronoi/laurent.hpp"
#include "voronoi/rational.hpp"

namespace voronoi {

// Unit-class representatives of (Z/p^k)^x in increasing residue order; k = 0
// yields the single class {1}.
inline const std::vector<i64>& unit_class_reps(i64 p, int k) {
  static std::map<std::pair<i64, int>, std::vector<i64>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<i64> reps;
    i64 q = ipow(p, k);
    if (k == 0) reps = {1};
    else
      for (i64 u = 1; u < q; ++u)
        if (u % p != 0) reps.push_back(u);
    it = cache.emplace(key, std::move(reps)).first;
  }
  return it->second;
}

// A character of Q_p^x with chi(p) = 1, determined by its restriction to the
// units, which factors through (Z/p^{a(chi)})^x.  Exponents are stored with
// respect to the canonical generators of the conductor-level group.
class PadicCharacter {
 public:
  PadicCharacter() = default;
  PadicCharacter(i64 p, int cond_exp, std::vector<i64> exps)
      : p_(p), c_(cond_exp), exps_(std::move(exps)) {
    const auto& U = prime_power_units(p_, c_);
    if (exps_.size() != U.gens.size())
      throw std::invalid_argument("PadicCharacter: exponent count mismatch");
    for (size_t j = 0; j < exps_.size(); ++j) exps_[j] = imod(exps_[j], U.orders[j]);
  }
  static PadicCharacter trivial(i64 p) { return PadicCharacter(p, 0, {}); }

  i64 prime() const { return p_; }
  int cond_exp() const { return c_; }   // a(chi)
  bool is_trivial() const { return c_ == 0; }

  // chi(u) for u coprime to p; u may be given modulo any p^L with L >= a(chi).
  cplx eval_unit(i64 u) const {
    if (c_ == 0) return {1.0, 0.0};
    const auto& U = prime_power_units(p_, c_);
    i64 x = imod(u, U.q);
    i64 a = 0, b = 1;
    for (size_t j = 0; j < exps_.size(); ++j) {
      i64 o = U.orders[j];
      i64 dl = U.dlog[j][x];
      if (dl < 0) throw std::invalid_argument("PadicCharacter: u not a unit");
      i64 t = mulmod(exps_[j], dl, o);
      i64 g = igcd(b, o);
      i64 nb = b / g * o;
      i64 na = imod(a * (o / g) + t * (b / g), nb);
      i64 g2 = igcd(na, nb);
      a = na / g2; b = nb / g2;
    }
    return e_frac(a, b);
  }

  // chi(x) for x in Q_p^x given exactly; the p-power part contributes 1.
  cplx eval(const Rat& x) const {
    if (c_ == 0) return {1.0, 0.0};
    return eval_unit(x.unit_mod(p_, c_));
  }

  cplx at_minus_one() const { return eval_unit(ipow(p_, std::max(c_, 1)) - 1); }

  PadicCharacter inverse() const {
    const auto& U = prime_power_units(p_, c_);
    std::vector<i64> e = exps_;
    for (size_t j = 0; j < e.size(); ++j) e[j] = imod(-e[j], U.orders[j]);
    return PadicCharacter(p_, c_, e);
  }

  bool operator<(const PadicCharacter& o) const {
    if (p_ != o.p_) return p_ < o.p_;
    if (c_ != o.c_) return c_ < o.c_;
    return exps_ < o.exps_;
  }
  bool operator==(const PadicCharacter& o) const {
    return p_ == o.p_ && c_ == o.c_ && exps_ == o.exps_;
  }

 private:
  i64 p_ = 2;
  int c_ = 0;
  std::vector<i64> exps_;
};

// All phi(p^k) characters with a(chi) <= k, enumerated as the primitive
// characters of each exact conductor level c = 0, 1, ..., k.
inline std::vector<PadicCharacter> enumerate_padic_characters(i64 p, int k) {
  if (k < 0) throw std::invalid_argument("enumerate_padic_characters: k >= 0");
  std::vector<PadicCharacter> out;
  out.push_back(PadicCharacter::trivial(p));
  for (int c = 1; c <= k; ++c) {
    const auto& U = prime_power_units(p, c);
    if (U.gens.empty()) continue;  // (Z/2)^x trivial: no conductor-2^1 characters
    i64 total = U.phi();
    std::vector<i64> cur(U.gens.size(), 0);
    for (i64 it = 0; it < total; ++it) {
      // keep only exponent tuples of exact conductor p^c
      bool primitive;
      if (p != 2) {
        i64 e0 = cur[0], o0 = U.orders[0];
        i64 ord = e0 == 0 ? 1 : o0 / igcd(e0, o0);
        i64 phicm1 = ipow(p, c - 1) - (c >= 2 ? ipow(p, c - 2) : 0);
        primitive = ord > 1 && (c == 1 ? ord > 1 : phicm1 % ord != 0);
      } else {
        // c == 2: nontrivial chi(-1) part only; c >= 3: 5-part of full order
        if (c == 2) {
          primitive = cur[0] == 1;
        } else {
          i64 e5 = cur.size() > 1 ? cur[1] : 0;
          i64 o5 = cur.size() > 1 ? U.orders[1] : 1;
          i64 ord5 = e5 == 0 ? 1 : o5 / igcd(e5, o5);
          primitive = ord5 == ipow(2, c - 2);
        }
      }
      if (primitive) out.emplace_back(p, c, cur);
      for (size_t j = 0; j < cur.size(); ++j) {
        if (++cur[j] < U.orders[j]) break;
        cur[j] = 0;
      }
    }
  }
  return out;
}

// Locally constant function on Q_p^x, constant on cosets of 1 + p^k Z_p and
// supported on shells v in [vmin, vmax]; values[v - vmin][i] is the value on
// the class of  unit_class_reps(p, k)[i] * p^v.
struct PadicShellFunction {
  i64 p = 2;
  int level = 0;
  int vmin = 0, vmax = -1;  // empty window means the zero function
  std::vector<std::vector<cplx>> values;

  static PadicShellFunction zero(i64 p) {
    PadicShellFunction f;
    f.p = p;
    return f;
  }

  static PadicShellFunction indicator_units(i64 p) {
    PadicShellFunction f;
    f.p = p; f.level = 0; f.vmin = 0; f.vmax = 0;
    f.values = {{cplx{1, 0}}};
    return f;
  }

  // Char_{1 + p^k Z_p}, level k, supported on shell 0.
  static PadicShellFunction indicator_one_plus_pk(i64 p, int k) {
    if (k < 1) throw std::invalid_argument("indicator_one_plus_pk: k >= 1");
    PadicShellFunction f;
    f.p = p; f.level = k; f.vmin = 0; f.vmax = 0;
    const auto& reps = unit_class_reps(p, k);
    f.values.assign(1, std::vector<cplx>(reps.size(), cplx{0, 0}));
    i64 q = ipow(p, k);
    for (size_t i = 0; i < reps.size(); ++i)
      if (imod(reps[i] - 1, q) == 0) f.values[0][i] = {1, 0};
    return f;
  }

  bool is_zero_window() const { return vmax < vmin; }
  size_t classes() const { return unit_class_reps(p, level).size(); }

  cplx value(i64 unit_rep, int v) const {
    if (is_zero_window() || v < vmin || v > vmax) return {0, 0};
    if (level == 0) return values[v - vmin][0];
    i64 q = ipow(p, level);
    i64 u = imod(unit_rep, q);
    const auto& reps = unit_class_reps(p, level);
    auto it = std::lower_bound(reps.begin(), reps.end(), u);
    if (it == reps.end() || *it != u)
      throw std::invalid_argument("PadicShellFunction::value: not a unit class");
    return values[v - vmin][it - reps.begin()];
  }

  cplx value_at(const Rat& x) const {
    if (x.is_zero()) return {0, 0};
    i64 v = x.val(p);
    if (is_zero_window() || v < vmin || v > vmax) return {0, 0};
    return value(level == 0 ? 1 : x.unit_mod(p, level), (int)v);
  }

  PadicShellFunction lifted_to_level(int K) const {
    if (K < level) throw std::invalid_argument("lifted_to_level: K >= level required");
    if (K == level) return *this;
    PadicShellFunction g;
    g.p = p; g.level = K; g.vmin = vmin; g.vmax = vmax;
    if (is_zero_window()) return g;
    const auto& reps = unit_class_reps(p, K);
    g.values.assign(vmax - vmin + 1, std::vector<cplx>(reps.size()));
    for (int s = 0; s <= vmax - vmin; ++s)
      for (size_t i = 0; i < reps.size(); ++i)
        g.values[s][i] = value(reps[i], vmin + s);
    return g;
  }

  PadicShellFunction operator*(cplx c) const {
    PadicShellFunction g = *this;
    for (auto& row : g.values)
      for (auto& x : row) x *= c;
    return g;
  }

  PadicShellFunction operator+(const PadicShellFunction& o) const {
    if (p != o.p) throw std::invalid_argument("shell function prime mismatch");
    if (is_zero_window()) return o;
    if (o.is_zero_window()) return *this;
    int K = std::max(level, o.level);
    PadicShellFunction a = lifted_to_level(K), b = o.lifted_to_level(K);
    PadicShellFunction g;
    g.p = p; g.level = K;
    g.vmin = std::min(a.vmin, b.vmin);
    g.vmax = std::max(a.vmax, b.vmax);
    const auto& reps = unit_class_reps(p, K);
    g.values.assign(g.vmax - g.vmin + 1, std::vector<cplx>(reps.size(), cplx{0, 0}));
    for (int v = g.vmin; v <= g.vmax; ++v)
      for (size_t i = 0; i < reps.size(); ++i)
        g.values[v - g.vmin][i] = a.value(reps[i], v) + b.value(reps[i], v);
    return g;
  }

  double max_abs() const {
    double m = 0;
    for (auto& row : values)
      for (auto& x : row) m = std::max(m, std::abs(x));
    return m;
  }
};

// Gauss sum G(a, chi) = int_{Z_p^x} psi_p(a y) chi(y) d^x y as an exact finite
// average at level max(a(chi), -v(a), 1).
inline cplx gauss_sum_padic(i64 p, i64 a_unit, i64 a_val, const PadicCharacter& chi) {
  int L = std::max({chi.cond_exp(), (int)(-a_val), 1});
  Rat a = rat_from_unit_val(p, a_unit, a_val);
  const auto& reps = unit_class_reps(p, L);
  cplx s = 0;
  for (i64 u : reps) s += psi_p(a * Rat(u), p) * chi.eval_unit(u);
  return s / (double)reps.size();
}

inline cplx gauss_sum_padic(i64 p, const Rat& a, const PadicCharacter& chi) {
  i64 v = a.val(p);
  int L = std::max({chi.cond_exp(), (int)(-v), 1});
  return gauss_sum_padic(p, a.unit_mod(p, L), v, chi);
}

// Closed form of the lemma: chi trivial: 1 / (1-p)^{-1}-free cases; ramified:
// supported on |a| = p^{a(chi)} where it equals zeta(1)|a|^{-1/2} chi(a)^{-1}
// eps(1/2, chi^{-1}).  Used by tests and by the epsilon extraction below.
inline cplx gauss_sum_padic_closed(i64 p, i64 a_unit, i64 a_val, const PadicCharacter& chi,
                                   cplx eps_half_inv_chi) {
  int c = chi.cond_exp();
  if (c == 0) {
    if (a_val >= 0) return {1.0, 0.0};
    if (a_val == -1) return {1.0 / (1.0 - (double)p), 0.0};
    return {0.0, 0.0};
  }
  if (a_val != -c) return {0.0, 0.0};
  double zeta1 = 1.0 / (1.0 - 1.0 / (double)p);
  double amag = std::pow((double)p, (double)c);
  cplx chival = chi.eval_unit(imod(a_unit, ipow(p, c)));
  return zeta1 / std::sqrt(amag) * std::conj(chival) * eps_half_inv_chi;
}

// eps(1/2, chi^{-1}, psi_p) extracted from the Gauss sum lemma at a = p^{-a(chi)}.
inline cplx epsilon_half_inv_padic(const PadicCharacter& chi) {
  int c = chi.cond_exp();
  if (c == 0) return {1.0, 0.0};
  i64 p = chi.prime();
  cplx G = gauss_sum_padic(p, 1, -c, chi);
  double zeta1 = 1.0 / (1.0 - 1.0 / (double)p);
  return G / zeta1 * std::pow((double)p, (double)c / 2.0);
}

// eps(1/2, chi, psi_p) = eps-of-inverse applied to chi^{-1}.
inline cplx epsilon_half_padic(const PadicCharacter& chi) {
  return epsilon_half_inv_padic(chi.inverse());
}

// Progression Gauss sum G^k(a, chi) = int_{1 + p^k Z_p} psi_p(a y) chi(y) d^x y.
inline cplx gauss_sum_progression(i64 p, i64 a_unit, i64 a_val, const PadicCharacter& chi, int k) {
  if (k < 1) throw std::invalid_argument("gauss_sum_progression: k >= 1 required");
  int L = std::max({k, chi.cond_exp(), (int)(-a_val), 1});
  Rat a = rat_from_unit_val(p, a_unit, a_val);
  i64 qL = ipow(p, L), qk = ipow(p, k);
  double phiL = (double)(qL - qL / p);
  cplx s = 0;
  for (i64 y = 1; y < qL; y += qk) s += psi_p(a * Rat(y), p) * chi.eval_unit(y);
  return s / phiL;
}

// Mellin transform: the spectrum maps chi with a(chi) <= level to the Laurent
// series in Z whose Z^m coefficient is the unit-average of Phi(u p^{-m}) chi(u).
struct MellinSpectrum {
  i64 p = 2;
  std::map<PadicCharacter, LaurentSeries> at;
};

inline MellinSpectrum mellin_padic(const PadicShellFunction& Phi) {
  MellinSpectrum S;
  S.p = Phi.p;
  if (Phi.is_zero_window()) return S;
  const auto& reps = unit_class_reps(Phi.p, Phi.level);
  double inv_count = 1.0 / (double)reps.size();
  for (const auto& chi : enumerate_padic_characters(Phi.p, Phi.level)) {
    LaurentSeries s;
    for (int v = Phi.vmin; v <= Phi.vmax; ++v) {
      cplx acc = 0;
      for (size_t i = 0; i < reps.size(); ++i)
        acc += Phi.values[v - Phi.vmin][i] * chi.eval_unit(reps[i]);
      acc *= inv_count;
      if (std::abs(acc) > 0.0) s.set_coeff(-v, acc);
    }
    s.trim(0.0);
    if (!s.is_zero()) S.at.emplace(chi, std::move(s));
  }
  return S;
}

// Inverse transform: Phi(u p^v) = sum_chi chi(u)^{-1} [Z^{-v}] S(chi).
inline PadicShellFunction mellin_inverse_padic(const MellinSpectrum& S) {
  PadicShellFunction f = PadicShellFunction::zero(S.p);
  if (S.at.empty()) return f;
  int K = 0, zlo = 0, zhi = -1;
  bool first = true;
  for (auto& [chi, s] : S.at) {
    if (s.is_zero()) continue;
    K = std::max(K, chi.cond_exp());
    if (first) { zlo = s.lo; zhi = s.hi(); first = false; }
    else { zlo = std::min(zlo, s.lo); zhi = std::max(zhi, s.hi()); }
  }
  if (first) return f;
  f.level = K;
  f.vmin = -zhi;
  f.vmax = -zlo;
  const auto& reps = unit_class_reps(S.p, K);
  f.values.assign(f.vmax - f.vmin + 1, std::vector<cplx>(reps.size(), cplx{0, 0}));
  for (auto& [chi, s] : S.at) {
    if (s.is_zero()) continue;
    for (size_t i = 0; i < reps.size(); ++i) {
      cplx cu = std::conj(chi.eval_unit(reps[i]));  // chi(u)^{-1}, unit modulus
      for (int v = f.vmin; v <= f.vmax; ++v)
        f.values[v - f.vmin][i] += cu * s.coeff(-v);
    }
  }
  return f;
}

}  // namespace voronoi
