#pragma once

// The p-adic generalized Bessel transform.  The transform of Phi is the unique
// function B with, for every character chi of finite conductor and Re(s) large,
//
//   M(|.|^{s-(n-1)/2} B, chi^{-1})
//     = chi(-1)^{n-1} gamma(1-s, chi pi, psi) M(|.|^{1-s-(n-1)/2} Phi, chi).
//
// The engine computes B by Mellin inversion: per character, multiply the
// weighted Mellin series of Phi^zeta by gamma(1-s, chi pi, psi) as a Laurent
// series in X = p^{-s}, read off shell coefficients, and resum over chi.
// Closed forms under the twist-minimal assumption and the generic support
// bound are implemented alongside, with the duality residual as the verifier.

#include "voronoi/localrep.hpp"

namespace voronoi {

// zeta in Q_p given as (unit class, valuation); zero means "no twist".
struct PadicModulus {
  bool zero = true;
  i64 unit = 1;
  i64 val = 0;

  static PadicModulus none() { return {}; }
  static PadicModulus of(i64 unit, i64 val) { return {false, unit, val}; }
  static PadicModulus of_rat(const Rat& x, i64 p) {
    if (x.is_zero()) return {};
    i64 v = x.val(p);
    // generous unit precision, capped so p^k stays within i64
    int k = (int)std::max<i64>(-v, 1) + 12;
    while (std::pow((double)p, k) > 4e17) --k;
    return {false, x.unit_mod(p, k), v};
  }
  Rat to_rat(i64 p) const {
    if (zero) throw std::domain_error("PadicModulus: zero has no rational value");
    return rat_from_unit_val(p, unit, val);
  }
};

struct BesselRequest {
  LocalRepresentation rep;
  PadicShellFunction phi;
  PadicModulus zeta;
  int cutoff = 10;  // highest output shell V
};

// Phi^zeta(y) = psi_p(y zeta) Phi(y); the output level is raised so the result
// is exactly represented.
inline PadicShellFunction twist_by_modulus(const PadicShellFunction& Phi, const PadicModulus& zeta) {
  if (zeta.zero || Phi.is_zero_window()) return Phi;
  i64 p = Phi.p;
  int K = Phi.level;
  for (int v = Phi.vmin; v <= Phi.vmax; ++v)
    K = std::max(K, (int)(-(v + zeta.val)));
  PadicShellFunction g = Phi.lifted_to_level(K);
  Rat z = zeta.to_rat(p);
  const auto& reps = unit_class_reps(p, K);
  for (int v = g.vmin; v <= g.vmax; ++v)
    for (size_t i = 0; i < reps.size(); ++i) {
      if (std::abs(g.values[v - g.vmin][i]) == 0.0) continue;
      Rat y = rat_from_unit_val(p, reps[i], v);
      g.values[v - g.vmin][i] *= psi_p(y * z, p);
    }
  return g;
}

// Generic lower bound on the support: B(y) = 0 for v(y) < bound when Phi obeys
// the Kirillov shell law (support in |y| <= 1).
inline int bessel_support_bound(const LocalRepresentation& rep, const PadicModulus& zeta) {
  int n = rep.n, a = rep.a_pi();
  if (zeta.zero || zeta.val >= 0) return -(n + a);
  int c = (int)(-zeta.val);
  return -((n - 1) * c + n + std::max(a, c));
}

namespace detail {

// Weighted Mellin series of Phi against chi at 1 - s - (n-1)/2:
// P_chi(X) = sum_v avg_u[Phi(u p^v) chi(u)] p^{v(n-3)/2} X^{-v}.
inline LaurentSeries phi_mellin_series(const PadicShellFunction& Phi, const PadicCharacter& chi, int n) {
  LaurentSeries s;
  if (Phi.is_zero_window()) return s;
  const auto& reps = unit_class_reps(Phi.p, Phi.level);
  double invc = 1.0 / (double)reps.size();
  for (int v = Phi.vmin; v <= Phi.vmax; ++v) {
    cplx acc = 0;
    for (size_t i = 0; i < reps.size(); ++i) {
      cplx val = Phi.values[v - Phi.vmin][i];
      if (std::abs(val) == 0.0) continue;
      acc += val * chi.eval_unit(reps[i]);
    }
    acc *= invc * std::pow((double)Phi.p, (double)v * (n - 3) / 2.0);
    if (std::abs(acc) > 0.0) s.set_coeff(-v, acc);
  }
  s.trim(0.0);
  return s;
}

}  // namespace detail

// The general engine.  Output window: [support floor derived from the series,
// cutoff]; the unit level equals the level of Phi^zeta.
inline PadicShellFunction bessel_general(const BesselRequest& req) {
  const i64 p = req.rep.p;
  const int n = req.rep.n;
  if (req.phi.p != p) throw std::invalid_argument("bessel_general: prime mismatch");
  PadicShellFunction tw = twist_by_modulus(req.phi, req.zeta);
  PadicShellFunction out = PadicShellFunction::zero(p);
  out.level = tw.level;
  if (tw.is_zero_window() || tw.max_abs() == 0.0) return out;

  int V = req.cutoff;
  auto chars = enumerate_padic_characters(p, tw.level);
  // per character: T_chi(X) = chi(-1)^{n-1} gamma(1-s, chi pi) P_chi(X)
  std::vector<std::pair<PadicCharacter, LaurentSeries>> terms;
  int wmin = V + 1;
  for (auto& chi : chars) {
    LaurentSeries P = detail::phi_mellin_series(tw, chi, n);
    if (P.is_zero()) continue;
    RationalFunction g = gamma_one_minus_s(req.rep, chi);
    cplx sign = (n - 1) % 2 == 0 ? cplx{1, 0} : chi.at_minus_one();
    LaurentSeries T = RationalFunction(g.num * P * sign, g.den).expand(V, "gamma(1-s, chi pi)");
    T.trim(1e-300);
    if (T.is_zero()) continue;
    wmin = std::min(wmin, T.lo);
    terms.emplace_back(chi, std::move(T));
  }
  if (terms.empty()) return out;
  if (V < wmin)
    throw std::invalid_argument("bessel_general: cutoff below the support floor " + std::to_string(wmin));

  out.vmin = wmin;
  out.vmax = V;
  const auto& reps = unit_class_reps(p, out.level);
  out.values.assign(out.vmax - out.vmin + 1, std::vector<cplx>(reps.size(), cplx{0, 0}));
  for (auto& [chi, T] : terms) {
    for (int w = std::max(T.lo, out.vmin); w <= std::min(T.hi(), out.vmax); ++w) {
      cplx coef = T.coeff(w) * std::pow((double)p, -(double)w * (n - 1) / 2.0);
      if (std::abs(coef) == 0.0) continue;
      for (size_t i = 0; i < reps.size(); ++i)
        out.values[w - out.vmin][i] += chi.eval_unit(reps[i]) * coef;
    }
  }
  return out;
}

// Closed form for twist-minimal pi with Phi = Char_{Z_p^x}:
// B(y) = 0 unless |y| = q^{max{a(pi), -n v(zeta)}}; on the support the value is
// the unramified term, the conductor-one character sum, or the pure ramified
// character sum, according to |zeta| <= 1, = q, or > q.
inline cplx bessel_closed_form_ox(const LocalRepresentation& rep, const PadicModulus& zeta,
                                  i64 y_unit, i64 y_val) {
  if (rep.is_unramified())
    throw std::invalid_argument("bessel_closed_form_ox: twist-minimal representation required");
  const auto& tm = rep.minimal();
  const i64 p = rep.p;
  const int n = rep.n;
  const double q = (double)p;
  i64 zv = zeta.zero ? 0 : zeta.val;
  int support = std::max<int>(tm.a_pi, (int)(-(i64)n * zv));
  if (y_val != -support) return {0.0, 0.0};

  if (zeta.zero || zv >= 0)
    return tm.eps0 * std::pow(q, (double)tm.a_pi * (n - 2) / 2.0);

  int c = (int)(-zv);
  auto char_sum = [&](int cond) {
    cplx s = 0;
    Rat zinv_y = rat_from_unit_val(p, y_unit, y_val) / zeta.to_rat(p);
    for (auto& chi : enumerate_padic_characters(p, cond)) {
      if (chi.cond_exp() != cond) continue;
      auto it = tm.eps_chi.find(chi);
      if (it == tm.eps_chi.end())
        throw std::invalid_argument("bessel_closed_form_ox: missing twisted root number at conductor " +
                                    std::to_string(cond));
      cplx sgn = (n - 1) % 2 == 0 ? cplx{1, 0} : chi.at_minus_one();
      s += sgn * chi.eval(zinv_y) * it->second * epsilon_half_inv_padic(chi);
    }
    return s;
  };

  if (c == 1) {
    cplx t1 = tm.eps0 * std::pow(q, (double)tm.a_pi * (n - 2) / 2.0) / (1.0 - q);
    double pref = std::pow(q, (double)std::max(tm.a_pi, n) * (n - 2) / 2.0 - 0.5) / (1.0 - 1.0 / q);
    return t1 + pref * char_sum(1);
  }
  double pref = std::pow(q, (double)support * (n - 2) / 2.0 + (double)zv / 2.0) / (1.0 - 1.0 / q);
  return pref * char_sum(c);
}

// Closed form for Phi = Char_{1 + p^k Z_p} (arithmetic progressions):
// B(y) = sum_chi G^k(zeta, chi) eps(1/2, chi pi) chi(-1)^{n-1} chi(y)
//        q^{a(chi pi)(n-2)/2} [v(y) = -a(chi pi)].
inline cplx bessel_closed_form_ap(const LocalRepresentation& rep, const PadicModulus& zeta, int k,
                                  i64 y_unit, i64 y_val) {
  if (rep.is_unramified())
    throw std::invalid_argument("bessel_closed_form_ap: twist-minimal representation required");
  if (k < 1) throw std::invalid_argument("bessel_closed_form_ap: k >= 1 required");
  const auto& tm = rep.minimal();
  const i64 p = rep.p;
  const int n = rep.n;
  const double q = (double)p;
  i64 zv = zeta.zero ? 0 : zeta.val;
  i64 zu = zeta.zero ? 1 : zeta.unit;
  int cmax = std::max(k, (int)std::max<i64>(-zv, 0));
  cplx total = 0;
  for (auto& chi : enumerate_padic_characters(p, cmax)) {
    int acp = std::max(tm.a_pi, n * chi.cond_exp());
    if (y_val != -acp) continue;
    cplx G = gauss_sum_progression(p, zu, zv, chi, k);
    if (std::abs(G) < 1e-300) continue;
    cplx eps;
    if (chi.cond_exp() == 0) {
      eps = tm.eps0;
    } else {
      auto it = tm.eps_chi.find(chi);
      if (it == tm.eps_chi.end())
        throw std::invalid_argument("bessel_closed_form_ap: missing twisted root number at conductor " +
                                    std::to_string(chi.cond_exp()));
      eps = it->second;
    }
    cplx sgn = (n - 1) % 2 == 0 ? cplx{1, 0} : chi.at_minus_one();
    total += G * eps * sgn * chi.eval_unit(y_unit) * std::pow(q, (double)acp * (n - 2) / 2.0);
  }
  return total;
}

// Trivial-bound report for the ramified closed form: the measured value of
// |B| q^{-max{a, -n v}(n-2)/2 - 3 v(zeta)/2}, to be compared against the fixed
// constant zeta(1) = (1 - p^{-1})^{-1}.
inline double bessel_trivial_bound_ratio(const LocalRepresentation& rep, const PadicModulus& zeta,
                                         i64 y_unit, i64 y_val) {
  const double q = (double)rep.p;
  i64 zv = zeta.zero ? 0 : zeta.val;
  int support = std::max<int>(rep.a_pi(), (int)(-(i64)rep.n * zv));
  double envelope = std::pow(q, (double)support * (rep.n - 2) / 2.0 + 1.5 * (double)zv);
  cplx v = bessel_closed_form_ox(rep, zeta, y_unit, y_val);
  return std::abs(v) / envelope;
}

// Duality residual: maximum coefficient mismatch, to order D in X, between the
// Mellin transform of B against chi^{-1} |.|^{s-(n-1)/2} and
// chi(-1)^{n-1} gamma(1-s, chi pi, psi) M(|.|^{1-s-(n-1)/2} Phi^zeta, chi).
inline double verify_duality(const LocalRepresentation& rep, const PadicShellFunction& Phi,
                             const PadicModulus& zeta, const PadicCharacter& chi, int D) {
  const i64 p = rep.p;
  const int n = rep.n;
  int needed = n * (rep.a_pi() + chi.cond_exp() + (int)std::abs(zeta.zero ? 0 : zeta.val)) + 10;
  if (D < needed)
    throw std::invalid_argument("verify_duality: D must be at least " + std::to_string(needed));
  PadicShellFunction tw = twist_by_modulus(Phi, zeta);
  if (tw.is_zero_window() || tw.max_abs() == 0.0) return 0.0;
  if (chi.cond_exp() > tw.level) return 0.0;  // both sides vanish

  BesselRequest req{rep, Phi, zeta, D};
  PadicShellFunction B = bessel_general(req);

  // left side: sum_w avg_u[B(u p^w) conj(chi(u))] p^{w(n-1)/2} X^w
  LaurentSeries lhs;
  const auto& reps = unit_class_reps(p, B.level);
  for (int w = B.vmin; w <= B.vmax; ++w) {
    cplx acc = 0;
    for (size_t i = 0; i < reps.size(); ++i)
      acc += B.values[w - B.vmin][i] * std::conj(chi.eval_unit(reps[i]));
    acc /= (double)reps.size();
    acc *= std::pow((double)p, (double)w * (n - 1) / 2.0);
    if (std::abs(acc) > 0.0) lhs.set_coeff(w, acc);
  }

  // right side
  LaurentSeries P = detail::phi_mellin_series(tw, chi, n);
  RationalFunction g = gamma_one_minus_s(rep, chi);
  cplx sign = (n - 1) % 2 == 0 ? cplx{1, 0} : chi.at_minus_one();
  LaurentSeries rhs = RationalFunction(g.num * P * sign, g.den).expand(D, "duality gamma factor");

  int lo = std::min(lhs.is_zero() ? 0 : lhs.lo, rhs.is_zero() ? 0 : rhs.lo);
  return max_coeff_difference(lhs, rhs, lo, D);
}

}  // namespace voronoi
